pub mod detect;
pub mod entropy;
pub mod error;
pub mod flow;
pub mod measure;
pub mod par;
pub mod scalar;
pub mod space;
pub mod systems;
