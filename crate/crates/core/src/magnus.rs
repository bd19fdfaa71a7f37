//! Truncated Magnus expansion into integer noncommutative power series.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::freegroup::FreeWord;

/// Largest supported rank; letters are packed four bits each.
pub const MAX_RANK: usize = 15;
/// Largest supported truncation degree.
pub const MAX_CUTOFF: usize = 16;

/// A monomial `X_{i_1} .. X_{i_k}` packed into a `u64`, first letter in the
/// lowest nibble. Letters are nonzero so the length is implicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_indices(indices: &[usize]) -> Monomial {
        debug_assert!(indices.len() <= MAX_CUTOFF);
        let mut bits = 0u64;
        for (k, &i) in indices.iter().enumerate() {
            debug_assert!((1..=MAX_RANK).contains(&i));
            bits |= (i as u64) << (4 * k);
        }
        Monomial(bits)
    }

    pub fn degree(self) -> usize {
        (64 - self.0.leading_zeros() as usize).div_ceil(4)
    }

    pub fn indices(self) -> Vec<usize> {
        (0..self.degree())
            .map(|k| ((self.0 >> (4 * k)) & 0xf) as usize)
            .collect()
    }

    /// `self` followed by `X_i`.
    fn times_letter(self, i: usize) -> Monomial {
        Monomial(self.0 | (i as u64) << (4 * self.degree()))
    }

    fn concat(self, other: Monomial) -> Monomial {
        if self.0 == 0 {
            return other;
        }
        Monomial(self.0 | other.0.checked_shl(4 * self.degree() as u32).unwrap_or(0))
    }
}

/// A power series over `X_1..X_rank` truncated above degree `cutoff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    rank: usize,
    cutoff: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl NcPoly {
    pub fn zero(rank: usize, cutoff: usize) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::GeneratorOutOfRange {
                index: rank,
                rank: MAX_RANK,
            });
        }
        if cutoff > MAX_CUTOFF {
            return Err(Error::InvalidCutoff(cutoff));
        }
        Ok(NcPoly {
            rank,
            cutoff,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(rank: usize, cutoff: usize) -> Result<Self> {
        let mut p = Self::zero(rank, cutoff)?;
        p.terms.insert(Monomial::ONE, BigInt::one());
        Ok(p)
    }

    /// Builds a polynomial from `(indices, coefficient)` pairs; terms above
    /// the cutoff are dropped.
    pub fn from_terms<'a>(
        rank: usize,
        cutoff: usize,
        terms: impl IntoIterator<Item = (&'a [usize], i64)>,
    ) -> Result<Self> {
        let mut p = Self::zero(rank, cutoff)?;
        for (idx, c) in terms {
            if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > rank) {
                return Err(Error::GeneratorOutOfRange { index: bad, rank });
            }
            if idx.len() <= cutoff {
                p.add_term(Monomial::from_indices(idx), BigInt::from(c));
            }
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check_compatible(&self, other: &NcPoly) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch {
                left: self.cutoff,
                right: other.cutoff,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    /// Coefficient of `X_{i_1} .. X_{i_k}`.
    pub fn coefficient(&self, indices: &[usize]) -> Result<BigInt> {
        if indices.len() > self.cutoff {
            return Err(Error::IndexTooLong {
                len: indices.len(),
                cutoff: self.cutoff,
            });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > self.rank) {
            return Err(Error::GeneratorOutOfRange {
                index: bad,
                rank: self.rank,
            });
        }
        Ok(self
            .terms
            .get(&Monomial::from_indices(indices))
            .cloned()
            .unwrap_or_default())
    }

    /// Right multiplication by the expansion of a single letter `x_i^{±1}`.
    fn mul_letter(&mut self, i: usize, positive: bool) {
        let d = self.cutoff;
        let old: Vec<(Monomial, BigInt)> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        for (m, c) in old {
            // x_i -> 1 + X_i ; x_i^-1 -> 1 - X_i + X_i^2 - ...
            let mut mono = m;
            let mut coeff = c;
            for _ in m.degree()..d {
                mono = mono.times_letter(i);
                if !positive {
                    coeff = -coeff;
                }
                self.add_term(mono, coeff.clone());
                if positive {
                    break;
                }
            }
        }
    }
}

/// Product truncated to degree at most the cutoff.
pub fn nc_mul(p: &NcPoly, q: &NcPoly) -> Result<NcPoly> {
    p.check_compatible(q)?;
    let mut out = NcPoly::zero(p.rank, p.cutoff)?;
    for (a, ca) in &p.terms {
        let da = a.degree();
        for (b, cb) in &q.terms {
            if da + b.degree() <= p.cutoff {
                out.add_term(a.concat(*b), ca * cb);
            }
        }
    }
    Ok(out)
}

/// Magnus expansion `x_i -> 1 + X_i` truncated at degree `cutoff`.
pub fn magnus_expand(w: &FreeWord, cutoff: usize) -> Result<NcPoly> {
    if cutoff < 1 {
        return Err(Error::InvalidCutoff(cutoff));
    }
    let mut p = NcPoly::one(w.rank(), cutoff)?;
    for l in w.letters() {
        p.mul_letter(l.gen(), l.is_positive());
    }
    Ok(p)
}

pub fn coefficient(p: &NcPoly, indices: &[usize]) -> Result<BigInt> {
    p.coefficient(indices)
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (m.degree(), m.indices()));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            let word: String = m.indices().iter().map(|i| format!("X{i}")).collect();
            match (word.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{word}")?,
                (false, false) => write!(f, "{mag}{word}")?,
            }
        }
        Ok(())
    }
}
