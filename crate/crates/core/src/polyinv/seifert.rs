//! Seifert matrices of closed braids and the determinant formula for the
//! Conway polynomial.
//!
//! The Seifert surface of a closed braid on `m` strands is a stack of `m`
//! disks joined by one half-twisted band per letter. For each column `i`
//! with letters at word positions `p_1 < .. < p_r`, the loop through bands
//! `p_t` and `p_{t+1}` gives a homology generator, `c - m + 1` in all when
//! the surface is connected.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::ConwayPoly;
use crate::braid::BraidWord;
use crate::error::{Error, Result};

/// Square integer matrix of linking numbers `lk(a, b⁺)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertMatrix {
    size: usize,
    entries: Vec<i64>,
    /// `false` when some column has no letter and the closure is split.
    connected: bool,
}

impl SeifertMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.size + c]
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        SeifertMatrix {
            size: rows.len(),
            entries: rows.concat(),
            connected: true,
        }
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.size.max(1)).map(<[i64]>::to_vec).take(self.size).collect()
    }
}

/// One homology generator: column `col`, bands at word positions `lo < hi`.
#[derive(Debug, Clone, Copy)]
struct Loop {
    col: usize,
    lo: usize,
    hi: usize,
}

pub fn seifert_matrix(b: &BraidWord) -> SeifertMatrix {
    let m = b.strands();
    let letters = b.letters();
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (p, &(i, _)) in letters.iter().enumerate() {
        positions[i].push(p);
    }
    let connected = (1..m).all(|i| !positions[i].is_empty());
    if !connected {
        return SeifertMatrix {
            size: 0,
            entries: Vec::new(),
            connected,
        };
    }
    let loops: Vec<Loop> = (1..m)
        .flat_map(|col| {
            positions[col]
                .windows(2)
                .map(move |w| Loop {
                    col,
                    lo: w[0],
                    hi: w[1],
                })
        })
        .collect();
    let sign = |p: usize| if letters[p].1 { 1i64 } else { -1 };
    let size = loops.len();
    let mut entries = vec![0i64; size * size];
    for (r, g) in loops.iter().enumerate() {
        for (c, h) in loops.iter().enumerate() {
            entries[r * size + c] = linking(g, h, &sign);
        }
    }
    SeifertMatrix {
        size,
        entries,
        connected,
    }
}

/// `lk(g, h⁺)` for two generators.
fn linking(g: &Loop, h: &Loop, sign: &impl Fn(usize) -> i64) -> i64 {
    if g.col == h.col {
        if g.lo == h.lo {
            // two half twists of the same sign make a full twist
            let (a, b) = (sign(g.lo), sign(g.hi));
            return if a == b { a } else { 0 };
        }
        // consecutive loops sharing a band
        if g.hi == h.lo && sign(g.hi) > 0 {
            return -1;
        }
        if h.hi == g.lo && sign(g.lo) < 0 {
            return 1;
        }
        return 0;
    }
    if h.col == g.col + 1 {
        // interleaved around the shared disk, only the left loop sees it
        if g.lo < h.lo && h.lo < g.hi && g.hi < h.hi {
            return -1;
        }
        if h.lo < g.lo && g.lo < h.hi && h.hi < g.hi {
            return 1;
        }
    }
    0
}

/// Exact integer determinant by Bareiss elimination.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Coefficients of `P(s) = det(s V - Vᵀ)`, lowest degree first, by exact
/// evaluation at `s = 0..=N` and Newton interpolation.
pub fn alexander_numerator(v: &SeifertMatrix) -> Vec<BigInt> {
    let n = v.size;
    let values: Vec<BigInt> = (0..=n as i64)
        .into_par_iter()
        .map(|s| {
            let mat = (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| BigInt::from(s * v.get(r, c) - v.get(c, r)))
                        .collect()
                })
                .collect();
            bareiss_det(mat)
        })
        .collect();
    // forward differences give Newton coefficients c_k = Δ^k P(0) / k!
    let mut diffs = values;
    let mut newton = Vec::with_capacity(n + 1);
    let mut fact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            fact *= k;
        }
        let (q, r) = diffs[0].div_rem(&fact);
        assert!(r.is_zero(), "interpolation of an integer polynomial");
        newton.push(q);
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    // expand Σ c_k s(s-1)..(s-k+1) into monomials
    let mut out = vec![BigInt::zero(); n + 1];
    let mut falling = vec![BigInt::one()];
    for (k, c) in newton.iter().enumerate() {
        for (d, f) in falling.iter().enumerate() {
            out[d] += c * f;
        }
        // falling *= (s - k)
        let mut next = vec![BigInt::zero(); falling.len() + 1];
        for (d, f) in falling.iter().enumerate() {
            next[d + 1] += f;
            next[d] -= f * BigInt::from(k);
        }
        falling = next;
    }
    out
}

/// Conway polynomial of the closure of `b` by the determinant method.
pub fn conway(b: &BraidWord) -> Result<ConwayPoly> {
    conway_from_seifert(&seifert_matrix(b))
}

/// `∇` from a Seifert matrix via `det(x V - x^-1 Vᵀ)`.
pub fn conway_from_seifert(v: &SeifertMatrix) -> Result<ConwayPoly> {
    if !v.connected {
        return Ok(ConwayPoly::zero());
    }
    let p = alexander_numerator(v);
    // det(x V - x^-1 Vᵀ) = x^-N P(x²): coefficient of s^k sits at x^(2k - N)
    let n = v.size as i64;
    let laurent: Vec<(i64, BigInt)> = p
        .into_iter()
        .enumerate()
        .map(|(k, c)| (2 * k as i64 - n, c))
        .collect();
    laurent_to_conway(laurent)
}

/// Rewrites a Laurent polynomial in `x = t^{1/2}` as a polynomial in
/// `z = x - x^{-1}`, failing if a remainder is left.
pub fn laurent_to_conway(terms: Vec<(i64, BigInt)>) -> Result<ConwayPoly> {
    let lo = terms.iter().map(|t| t.0).min().unwrap_or(0).min(0);
    let hi = terms.iter().map(|t| t.0).max().unwrap_or(0).max(0);
    let width = (hi - lo) as usize;
    let mut coeffs = vec![BigInt::zero(); width + 1];
    for (e, c) in terms {
        coeffs[(e - lo) as usize] += c;
    }
    let mut out = vec![BigInt::zero(); hi.max(0) as usize + 1];
    for e in (0..=hi).rev() {
        let a = coeffs[(e - lo) as usize].clone();
        if a.is_zero() {
            continue;
        }
        out[e as usize] = a.clone();
        // subtract a (x - x^-1)^e = a Σ_j C(e,j) (-1)^j x^(e-2j)
        let mut binom = BigInt::one();
        for j in 0..=e {
            let exp = e - 2 * j;
            let term = &a * &binom;
            let slot = &mut coeffs[(exp - lo) as usize];
            if j % 2 == 0 {
                *slot -= term;
            } else {
                *slot += term;
            }
            binom = binom * BigInt::from(e - j) / BigInt::from(j + 1);
        }
    }
    if let Some(k) = coeffs.iter().position(|c| !c.is_zero()) {
        return Err(Error::NotConwayForm(format!(
            "remainder at x^{}",
            k as i64 + lo
        )));
    }
    Ok(ConwayPoly::from_coeffs(out))
}
