//! Transitivity and mixing of an interval map on a partition into closed
//! cells, using exact interval images.
//!
//! For a continuous map the image of a cell is an interval, so the orbit of
//! a cell is a sequence of exact intervals. Once it repeats, every hitting
//! set `N(int U, int V)` is eventually periodic and both properties are
//! decided exactly at cell resolution.

use std::collections::HashMap;

use super::{PropertyVerdict, Witness};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::scalar::Rational;
use crate::systems::interval::{big, ExactIntervalMap, Interval};
use crate::systems::{Generator, SystemDef};

/// Iteration cap per cell orbit.
pub const CELL_ORBIT_CAP: usize = 100_000;

#[derive(Clone, Debug)]
pub struct CellPartition {
    cells: Vec<Interval>,
}

impl CellPartition {
    /// `count` equal closed cells of `[lo, hi]`.
    pub fn uniform(lo: Rational, hi: Rational, count: usize) -> Result<Self> {
        if count == 0 || lo >= hi {
            return Err(Error::Parameter("cell partition needs lo < hi and count > 0".into()));
        }
        let w = (hi - lo) / Rational::from_integer(count as i128);
        let cells = (0..count as i128)
            .map(|i| {
                Interval::from_rationals(
                    lo + w * Rational::from_integer(i),
                    lo + w * Rational::from_integer(i + 1),
                )
            })
            .collect();
        Ok(CellPartition { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, i: usize) -> &Interval {
        &self.cells[i]
    }

    fn describe(&self, i: usize) -> String {
        let c = &self.cells[i];
        format!("[{}, {}]", c.lo, c.hi)
    }
}

struct CellOrbit {
    images: Vec<Interval>,
    cycle_start: usize,
}

impl CellOrbit {
    /// Times `n >= 1` represented in `images` (the rest repeat the cycle).
    fn times(&self) -> std::ops::Range<usize> {
        1..self.images.len().max(1)
    }
}

fn cell_orbit(f: &ExactIntervalMap, start: &Interval) -> Result<CellOrbit> {
    let mut seen: HashMap<Interval, usize> = HashMap::new();
    let mut images = Vec::new();
    let mut cur = start.clone();
    for n in 0..CELL_ORBIT_CAP {
        if let Some(&first) = seen.get(&cur) {
            // close the cycle so times 1..=len cover every residue
            images.push(cur);
            return Ok(CellOrbit {
                images,
                cycle_start: first,
            });
        }
        seen.insert(cur.clone(), n);
        let next = f.image(&cur);
        images.push(std::mem::replace(&mut cur, next));
    }
    Err(Error::ResourceCap(format!(
        "cell orbit did not repeat within {CELL_ORBIT_CAP} steps"
    )))
}

fn exact_autonomous(sys: &SystemDef) -> Result<ExactIntervalMap> {
    match sys.generator() {
        Generator::Autonomous(m) => m
            .spec()
            .exact_interval_map()
            .ok_or_else(|| Error::Parameter("cell deciders need an exact interval map".into())),
        _ => Err(Error::Parameter("cell deciders need an autonomous system".into())),
    }
}

/// Cell partition of the system's interval into `count` cells.
pub fn partition_of(sys: &SystemDef, count: usize) -> Result<CellPartition> {
    let (lo, hi, _) = sys
        .space()
        .interval_bounds()
        .ok_or_else(|| Error::Parameter("cell deciders need an interval space".into()))?;
    CellPartition::uniform(lo, hi, count)
}

fn meets_interior(iv: &Interval, cell: &Interval) -> bool {
    iv.meets_open(&cell.lo, &cell.hi)
}

fn orbits(f: &ExactIntervalMap, cells: &CellPartition, exec: Exec) -> Result<Vec<CellOrbit>> {
    exec.map(&cells.cells, |c| cell_orbit(f, c)).into_iter().collect()
}

/// For all cells `U, V` some `n >= 1` has `f^n(U) ∩ int V != ∅`.
pub fn decide_cell_transitive(sys: &SystemDef, count: usize, exec: Exec) -> Result<PropertyVerdict> {
    const P: &str = "transitive_on_cells";
    let f = exact_autonomous(sys)?;
    let cells = partition_of(sys, count)?;
    let orbits = orbits(&f, &cells, exec)?;
    for (u, orbit) in orbits.iter().enumerate() {
        for v in 0..cells.len() {
            let hit = orbit.times().any(|t| meets_interior(&orbit.images[t], cells.cell(v)));
            if !hit {
                return Ok(PropertyVerdict::fails(
                    P,
                    Witness::Cells {
                        u,
                        v,
                        detail: format!(
                            "orbit of {} never meets the interior of {}",
                            cells.describe(u),
                            cells.describe(v)
                        ),
                    },
                ));
            }
        }
    }
    Ok(PropertyVerdict::holds(P).with_note(format!("{count} cells, exact interval images")))
}

/// For all cells `U, V` every late enough `n` has `f^n(U) ∩ int V != ∅`.
pub fn decide_cell_mixing(sys: &SystemDef, count: usize, exec: Exec) -> Result<PropertyVerdict> {
    const P: &str = "mixing_on_cells";
    let f = exact_autonomous(sys)?;
    let cells = partition_of(sys, count)?;
    let orbits = orbits(&f, &cells, exec)?;
    for (u, orbit) in orbits.iter().enumerate() {
        let cycle = orbit.cycle_start.max(1)..orbit.images.len();
        for v in 0..cells.len() {
            if let Some(t) = cycle
                .clone()
                .find(|&t| !meets_interior(&orbit.images[t], cells.cell(v)))
            {
                let period = orbit.images.len() - 1 - orbit.cycle_start;
                return Ok(PropertyVerdict::fails(
                    P,
                    Witness::Cells {
                        u,
                        v,
                        detail: format!(
                            "f^n of {} misses the interior of {} for n = {t} + k*{period}",
                            cells.describe(u),
                            cells.describe(v)
                        ),
                    },
                ));
            }
        }
    }
    Ok(PropertyVerdict::holds(P).with_note(format!("{count} cells, exact interval images")))
}

/// Exact image `f^n(cell)`.
pub fn cell_image(sys: &SystemDef, cell: &Interval, n: usize) -> Result<Interval> {
    let f = exact_autonomous(sys)?;
    Ok((0..n).fold(cell.clone(), |iv, _| f.image(&iv)))
}

/// `[a, b]` as an exact interval.
pub fn closed(a: Rational, b: Rational) -> Interval {
    Interval::new(big(&a), big(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::Status;
    use crate::scalar::rat;
    use crate::systems::zoo;

    #[test]
    fn fig1_transitive_not_mixing_on_cells() {
        let sys = zoo::fig1(16).unwrap();
        for count in [4, 8, 16] {
            let t = decide_cell_transitive(&sys, count, Exec::Sequential).unwrap();
            assert_eq!(t.status, Status::Holds, "{count} cells");
            let m = decide_cell_mixing(&sys, count, Exec::Sequential).unwrap();
            assert_eq!(m.status, Status::Fails);
        }
    }

    #[test]
    fn ex34_not_transitive_on_cells() {
        let sys = zoo::ex34(16).unwrap();
        let t = decide_cell_transitive(&sys, 4, Exec::Sequential).unwrap();
        assert_eq!(t.status, Status::Fails);
    }

    #[test]
    fn fig1_halves_swap_exactly() {
        let sys = zoo::fig1(8).unwrap();
        let left = closed(rat(-1, 1), rat(0, 1));
        let right = closed(rat(0, 1), rat(1, 1));
        assert_eq!(cell_image(&sys, &left, 1).unwrap(), right);
        assert_eq!(cell_image(&sys, &right, 1).unwrap(), left);
    }
}
