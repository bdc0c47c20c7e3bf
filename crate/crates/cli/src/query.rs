//! Ad-hoc queries against a definition file. Each returns a JSON payload
//! and the lines of its text rendering.

use indyn_core::detect::{
    decide_shadowing, find_chain, pair_stats, sensitivity_times, ChainSearch, MeasureGridSystem, Status,
    SHADOWING_NODE_CAP,
};
use indyn_core::entropy::{entropy_estimate, TimeSequence};
use indyn_core::measure::{prohorov_bruteforce, prohorov_fast, ENUMERATION_CAP};
use indyn_core::par::Exec;
use indyn_core::scalar::{parse_scalar, Scalar};
use serde_json::{json, Value};

use crate::definition::Definition;
use crate::CliError;

pub struct Answer {
    pub value: Value,
    pub lines: Vec<String>,
    /// Set when a search stopped at its cap without deciding.
    pub capped: bool,
}

impl Answer {
    fn new(value: Value, lines: Vec<String>) -> Self {
        Answer {
            value,
            lines,
            capped: false,
        }
    }
}

pub fn scalar(name: &str, text: &str) -> Result<Scalar, CliError> {
    parse_scalar(text).ok_or_else(|| CliError::Usage(format!("--{name}: cannot parse `{text}`")))
}

pub fn prohorov(def: &Definition, mu: &str, nu: &str) -> Result<Answer, CliError> {
    let s = def.system.space();
    let (m, n) = (def.measure(mu)?, def.measure(nu)?);
    let d = prohorov_fast(s, m, n)?;
    let support = m
        .support()
        .chain(n.support())
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let oracle = if support <= ENUMERATION_CAP {
        Some(prohorov_bruteforce(s, m, n)?)
    } else {
        None
    };
    let agrees = oracle.as_ref().map(|o| o.eq_tol(&d));
    if agrees == Some(false) {
        return Err(CliError::Core(indyn_core::error::Error::Parameter(format!(
            "solver disagreement: fast {d}, oracle {}",
            oracle.unwrap()
        ))));
    }
    let mut lines = vec![format!("P({mu}, {nu}) = {d} ~ {:.12}", d.to_f64())];
    lines.push(match agrees {
        Some(_) => "oracle: agrees".into(),
        None => format!("oracle: skipped (joint support {support} > {ENUMERATION_CAP})"),
    });
    Ok(Answer::new(
        json!({"mu": mu, "nu": nu, "distance": d, "float": d.to_f64(), "oracle_checked": agrees.is_some()}),
        lines,
    ))
}

pub fn orbit(def: &Definition, from: &str, steps: usize) -> Result<Answer, CliError> {
    let s = def.system.space();
    let x = def.point(from)?;
    let labels: Vec<String> = def
        .system
        .orbit(x, steps)
        .iter()
        .map(|&p| s.label(p).to_string())
        .collect();
    let lines = vec![labels.join(" -> ")];
    Ok(Answer::new(
        json!({"from": from, "steps": steps, "orbit": labels}),
        lines,
    ))
}

pub fn chain(
    def: &Definition,
    from: &str,
    to: &str,
    delta: Scalar,
    max_len: Option<usize>,
) -> Result<Answer, CliError> {
    let sys = &def.system;
    let (x, y) = (def.point(from)?.idx(), def.point(to)?.idx());
    let max_len = max_len.unwrap_or(sys.space().len() + 1);
    let r = find_chain(sys, x, y, delta, max_len);
    let line = match &r {
        ChainSearch::Found(c) => {
            let labels: Vec<&str> = c
                .states
                .iter()
                .map(|&i| sys.space().label(indyn_core::space::Point::from(i)))
                .collect();
            format!("chain of length {}: {}", c.len(), labels.join(" -> "))
        }
        ChainSearch::Absent { closure, certified } => format!(
            "no {delta}-chain from {from} to {to}; {}",
            match (closure, certified) {
                (Some(c), true) => format!("certified by a closed reachable set of {} points", c.len()),
                _ => format!("searched up to length {max_len} only"),
            }
        ),
    };
    Ok(Answer::new(
        json!({"from": from, "to": to, "delta": delta, "result": r}),
        vec![line],
    ))
}

pub fn shadowing(
    def: &Definition,
    delta: Scalar,
    eps: Scalar,
    grid: Option<usize>,
    exec: Exec,
) -> Result<Answer, CliError> {
    let v = match grid {
        None => decide_shadowing(&def.system, delta, eps, SHADOWING_NODE_CAP),
        Some(q) => {
            let g = MeasureGridSystem::build(&def.system, q, 1_000_000, exec)?;
            decide_shadowing(&g, delta, eps, SHADOWING_NODE_CAP)
        }
    };
    let level = grid.map_or("base system".to_string(), |q| format!("induced system on M_{q}"));
    let mut a = Answer::new(
        json!({"level": level, "delta": delta, "eps": eps, "verdict": v}),
        vec![format!("shadowing ({level}, delta={delta}, eps={eps}): {:?}", v.status)],
    );
    a.capped = v.status == Status::Unknown;
    Ok(a)
}

pub fn sensitivity(def: &Definition, x: &str, eps: Scalar, delta: Scalar, horizon: usize) -> Result<Answer, CliError> {
    let t = sensitivity_times(&def.system, def.point(x)?, eps, delta, horizon, None)?;
    let line = format!(
        "N(x={x}, eps={eps}, delta={delta}) up to {horizon}: {} times, density {:.3}, cofinite at horizon: {}",
        t.members.len(),
        t.lower_density,
        t.cofinite_at_horizon
    );
    Ok(Answer::new(
        json!({"x": x, "eps": eps, "delta": delta, "times": t}),
        vec![line],
    ))
}

pub fn entropy(def: &Definition, eps: &[f64], n_max: usize, exec: Exec) -> Result<Answer, CliError> {
    let ns: Vec<usize> = (1..=n_max.max(1)).collect();
    let e = entropy_estimate(&def.system, &TimeSequence::AllIntegers, eps, &ns, None, exec)?;
    let mut lines = vec![format!("entropy {} ({})", e.estimate, e.label)];
    lines.extend(e.slopes.iter().map(|(eps, s)| format!("  eps={eps}: slope {s:.4}")));
    if let Some(n) = &e.note {
        lines.push(format!("  note: {n}"));
    }
    Ok(Answer::new(serde_json::to_value(&e).expect("serializable"), lines))
}

pub fn pairstats(
    def: &Definition,
    x: &str,
    y: &str,
    horizon: usize,
    thresholds: &[f64],
    delta: f64,
) -> Result<Answer, CliError> {
    let st = pair_stats(
        &def.system,
        def.point(x)?.idx(),
        def.point(y)?.idx(),
        horizon,
        thresholds,
        1e-9,
        delta,
    );
    let line = format!(
        "d over [0,{horizon}]: min {} max {}; tail min {} max {}; Li-Yorke candidate: {}",
        st.min_distance, st.max_distance, st.tail_min, st.tail_max, st.li_yorke_candidate
    );
    Ok(Answer::new(
        serde_json::to_value(&st).expect("serializable"),
        vec![line],
    ))
}
