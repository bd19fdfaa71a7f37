//! Conway polynomial by skein recursion towards a descending diagram.
//!
//! Components are ordered by their smallest arc label and traversed from
//! that arc. A crossing first met on its under-strand is "bad"; once no bad
//! crossing is left the diagram is descending, hence an unlink. At a bad
//! crossing `∇(D) = ∇(D') + sign · z · ∇(D_0)`, where `D'` is `D` with the
//! crossing switched and `D_0` is its oriented smoothing. Switching keeps all
//! arc labels, so the bad set strictly shrinks; smoothing drops a crossing.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::ConwayPoly;
use crate::error::{Error, Result};
use crate::pd::{PdCode, PdCrossing};

pub const DEFAULT_CROSSING_LIMIT: usize = 16;

type MemoKey = (usize, Vec<PdCrossing>);

/// Conway polynomial of a PD code with at most `crossing_limit` crossings.
pub fn conway_skein(pd: &PdCode, crossing_limit: usize) -> Result<ConwayPoly> {
    if pd.crossings.len() > crossing_limit {
        return Err(Error::CrossingLimit {
            crossings: pd.crossings.len(),
            limit: crossing_limit,
        });
    }
    let free = pd.free_loops()?;
    let mut memo = HashMap::new();
    Ok(ConwayPoly::from_coeffs(eval(&pd.crossings, free, &mut memo)))
}

fn eval(xs: &[PdCrossing], free: usize, memo: &mut HashMap<MemoKey, Vec<BigInt>>) -> Vec<BigInt> {
    // a crossing-free circle next to anything else splits off
    if xs.is_empty() {
        return if free == 1 { vec![BigInt::from(1)] } else { Vec::new() };
    }
    if free > 0 {
        return Vec::new();
    }
    let key = canonical_key(xs, free);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let result = match first_bad_crossing(xs) {
        None => {
            let comps = trace(xs).len();
            if comps == 1 {
                vec![BigInt::from(1)]
            } else {
                Vec::new()
            }
        }
        Some(k) => {
            let sign = xs[k].sign;
            let mut switched = xs.to_vec();
            switched[k] = xs[k].switched();
            let a = eval(&switched, free, memo);
            let (smoothed, extra) = smooth(xs, k);
            let b = eval(&smoothed, free + extra, memo);
            // a + sign * z * b
            let mut out = a;
            if out.len() < b.len() + 1 {
                out.resize(b.len() + 1, BigInt::default());
            }
            for (i, c) in b.into_iter().enumerate() {
                if sign > 0 {
                    out[i + 1] += c;
                } else {
                    out[i + 1] -= c;
                }
            }
            out
        }
    };
    memo.insert(key, result.clone());
    result
}

/// Arc sequences of the components, each starting at its smallest arc;
/// components sorted by that arc.
fn trace(xs: &[PdCrossing]) -> Vec<Vec<usize>> {
    let mut succ = HashMap::with_capacity(xs.len() * 2);
    for x in xs {
        let (i, o) = x.under();
        succ.insert(i, o);
        let (i, o) = x.over();
        succ.insert(i, o);
    }
    let mut arcs: Vec<usize> = succ.keys().copied().collect();
    arcs.sort_unstable();
    let mut seen = std::collections::HashSet::new();
    let mut comps = Vec::new();
    for start in arcs {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut a = start;
        while seen.insert(a) {
            comp.push(a);
            a = succ[&a];
        }
        comps.push(comp);
    }
    comps
}

fn first_bad_crossing(xs: &[PdCrossing]) -> Option<usize> {
    // head of each arc: (crossing, entering on the under-strand)
    let mut head = HashMap::with_capacity(xs.len() * 2);
    for (k, x) in xs.iter().enumerate() {
        head.insert(x.under().0, (k, true));
        head.insert(x.over().0, (k, false));
    }
    let mut visited = vec![false; xs.len()];
    for comp in trace(xs) {
        for a in comp {
            let (k, under) = head[&a];
            if !visited[k] {
                if under {
                    return Some(k);
                }
                visited[k] = true;
            }
        }
    }
    None
}

/// Oriented smoothing of crossing `k`; returns the new crossings and the
/// number of crossing-free circles created.
fn smooth(xs: &[PdCrossing], k: usize) -> (Vec<PdCrossing>, usize) {
    let x = xs[k];
    let [a, b, c, d] = x.arcs;
    // incoming under joins outgoing over, incoming over joins outgoing under
    let mut pairs = if x.sign > 0 {
        [(a, b), (d, c)]
    } else {
        [(a, d), (b, c)]
    };
    let mut rest: Vec<PdCrossing> = xs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, y)| *y)
        .collect();
    let mut loops = 0;
    for p in 0..2 {
        let (inc, out) = pairs[p];
        if inc == out {
            loops += 1;
            continue;
        }
        let rename = |v: &mut usize| {
            if *v == out {
                *v = inc;
            }
        };
        for y in &mut rest {
            y.arcs.iter_mut().for_each(rename);
        }
        for q in pairs.iter_mut().skip(p + 1) {
            rename(&mut q.0);
            rename(&mut q.1);
        }
    }
    (rest, loops)
}

/// Relabels arcs along the traversal and sorts the crossings.
fn canonical_key(xs: &[PdCrossing], free: usize) -> MemoKey {
    let mut relabel = HashMap::with_capacity(xs.len() * 2);
    for comp in trace(xs) {
        for a in comp {
            let next = relabel.len() + 1;
            relabel.insert(a, next);
        }
    }
    let mut out: Vec<PdCrossing> = xs
        .iter()
        .map(|x| PdCrossing {
            sign: x.sign,
            arcs: x.arcs.map(|a| relabel[&a]),
        })
        .collect();
    out.sort_unstable();
    (free, out)
}
