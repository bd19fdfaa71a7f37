//! Oriented planar-diagram codes.
//!
//! A crossing lists four arc labels counterclockwise starting from the
//! incoming under-strand. The under-strand runs `arcs[0] -> arcs[2]`; the
//! over-strand runs `arcs[3] -> arcs[1]` on a positive crossing and
//! `arcs[1] -> arcs[3]` on a negative one. `components` counts every link
//! component, including crossing-free circles, which carry no arcs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PdCrossing {
    pub sign: i8,
    pub arcs: [usize; 4],
}

impl PdCrossing {
    /// `(incoming, outgoing)` arcs of the under- and over-strand.
    pub fn under(&self) -> (usize, usize) {
        (self.arcs[0], self.arcs[2])
    }

    pub fn over(&self) -> (usize, usize) {
        if self.sign > 0 {
            (self.arcs[3], self.arcs[1])
        } else {
            (self.arcs[1], self.arcs[3])
        }
    }

    /// The same crossing with over and under exchanged.
    pub fn switched(&self) -> PdCrossing {
        let [a, b, c, d] = self.arcs;
        if self.sign > 0 {
            PdCrossing {
                sign: -1,
                arcs: [d, a, b, c],
            }
        } else {
            PdCrossing {
                sign: 1,
                arcs: [b, c, d, a],
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCode {
    pub components: usize,
    pub crossings: Vec<PdCrossing>,
}

impl PdCode {
    pub fn new(components: usize, crossings: Vec<PdCrossing>) -> Self {
        PdCode {
            components,
            crossings,
        }
    }

    pub fn unlink(components: usize) -> Self {
        PdCode::new(components, Vec::new())
    }

    /// Relabels arcs as `1..` in order of first appearance.
    pub fn compact(mut self) -> Self {
        let mut map = HashMap::new();
        for x in &mut self.crossings {
            for a in &mut x.arcs {
                let next = map.len() + 1;
                *a = *map.entry(*a).or_insert(next);
            }
        }
        self
    }

    /// Maps each incoming arc to the arc leaving the same crossing along the
    /// same strand; checks that every arc has exactly one head and one tail.
    pub fn successor_map(&self) -> Result<HashMap<usize, usize>> {
        let mut succ = HashMap::new();
        let mut tails = HashMap::new();
        for x in &self.crossings {
            if x.sign != 1 && x.sign != -1 {
                return Err(Error::MalformedPd(format!("sign {}", x.sign)));
            }
            for (i, o) in [x.under(), x.over()] {
                if succ.insert(i, o).is_some() {
                    return Err(Error::MalformedPd(format!("arc {i} enters twice")));
                }
                if tails.insert(o, i).is_some() {
                    return Err(Error::MalformedPd(format!("arc {o} leaves twice")));
                }
            }
        }
        if let Some(a) = succ.keys().find(|a| !tails.contains_key(a)) {
            return Err(Error::MalformedPd(format!("arc {a} never leaves a crossing")));
        }
        Ok(succ)
    }

    /// Number of components passing through at least one crossing.
    pub fn crossing_components(&self) -> Result<usize> {
        let succ = self.successor_map()?;
        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        let mut arcs: Vec<usize> = succ.keys().copied().collect();
        arcs.sort_unstable();
        for start in arcs {
            if seen.contains(&start) {
                continue;
            }
            count += 1;
            let mut a = start;
            while seen.insert(a) {
                a = succ[&a];
            }
        }
        Ok(count)
    }

    /// Validates the code and returns the total component count.
    pub fn count_components(&self) -> Result<usize> {
        let c = self.crossing_components()?;
        if c > self.components {
            return Err(Error::MalformedPd(format!(
                "{c} components through crossings but only {} declared",
                self.components
            )));
        }
        Ok(self.components)
    }

    /// Crossing-free circles.
    pub fn free_loops(&self) -> Result<usize> {
        Ok(self.components - self.crossing_components()?)
    }

    /// Disjoint union, placing `other` beside `self`.
    pub fn disjoint_union(&self, other: &PdCode) -> PdCode {
        let shift = self
            .crossings
            .iter()
            .flat_map(|x| x.arcs)
            .max()
            .unwrap_or(0);
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|x| PdCrossing {
            sign: x.sign,
            arcs: x.arcs.map(|a| a + shift),
        }));
        PdCode::new(self.components + other.components, crossings)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("PD code serializes")
    }

    pub fn from_json(text: &str) -> Result<PdCode> {
        let pd: PdCode =
            serde_json::from_str(text).map_err(|e| Error::MalformedPd(e.to_string()))?;
        pd.count_components()?;
        Ok(pd)
    }
}
