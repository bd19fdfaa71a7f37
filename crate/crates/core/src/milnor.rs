//! Milnor invariants of string links, read off the Magnus expansion of
//! longitudes obtained from the Artin action.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::braid::{BraidWord, StringLinkPresentation};
use crate::error::{Error, Result};
use crate::freegroup::{artin_endo, FreeGroupEndo, FreeWord, Letter};
use crate::magnus::magnus_expand;
use crate::perm::Permutation;
use crate::treealg::TreeVector;

/// A non-repeating Milnor index `(i_1, .., i_k, j)`; the last entry names the
/// longitude.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MilnorIndex(Vec<usize>);

impl MilnorIndex {
    pub fn new(indices: Vec<usize>, components: usize) -> Result<Self> {
        if indices.len() < 2 || indices.len() > components {
            return Err(Error::InvalidIndex(indices));
        }
        if indices.iter().any(|&i| i == 0 || i > components) {
            return Err(Error::InvalidIndex(indices));
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return Err(Error::RepeatedIndex(indices));
        }
        Ok(MilnorIndex(indices))
    }

    /// `(σ(1), .., σ(n-1), n, n+1)`.
    pub fn for_sigma(sigma: &Permutation) -> Result<Self> {
        let n = sigma.len() + 1;
        let mut idx = sigma.images().to_vec();
        idx.push(n);
        idx.push(n + 1);
        MilnorIndex::new(idx, n + 1)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    fn split(&self) -> (&[usize], usize) {
        let (last, head) = self.0.split_last().expect("index has length >= 2");
        (head, *last)
    }
}

/// Extracts `l` from a reduced word of the form `l x_j l^-1` and removes the
/// `x_j`-exponent from `l`.
fn longitude_from_image(image: &FreeWord, j: usize) -> Result<FreeWord> {
    let letters = image.letters();
    let len = letters.len();
    if len.is_multiple_of(2) || letters[len / 2] != Letter::new(j, true) {
        return Err(Error::NotConjugate(j));
    }
    let head = &letters[..len / 2];
    let tail = &letters[len / 2 + 1..];
    if head.iter().rev().zip(tail).any(|(a, b)| a.inverse() != *b) {
        return Err(Error::NotConjugate(j));
    }
    let lon = FreeWord::from_letters(image.rank(), head.iter().copied());
    let e = lon.exponent_sum(j);
    let framing = (0..e.unsigned_abs()).map(|_| Letter::new(j, e < 0));
    Ok(FreeWord::from_letters(
        image.rank(),
        lon.letters().iter().copied().chain(framing),
    ))
}

fn longitude_of(endo: &FreeGroupEndo, j: usize) -> Result<FreeWord> {
    longitude_from_image(endo.image(j), j)
}

/// The longitude `l_j` with `x_j -> l_j x_j l_j^-1`, with zero `x_j`-exponent.
pub fn longitude(s: &StringLinkPresentation, j: usize) -> Result<FreeWord> {
    let m = s.n() + 1;
    if j == 0 || j > m {
        return Err(Error::StrandOutOfRange { strand: j, strands: m });
    }
    longitude_of(&artin_endo(s.braid().word()), j)
}

fn to_i64(v: num_bigint::BigInt) -> Result<i64> {
    v.to_i64().ok_or(Error::Overflow)
}

/// The Magnus ring modulo monomials with a repeated letter or a letter
/// outside `letters`, cut at `degree`. Both sets span two-sided ideals, so
/// the quotient is an algebra and non-repeating coefficients survive.
struct Multilinear {
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// `table[a]` lists `(b, c)` with `basis[a] basis[b] = basis[c]`.
    table: Vec<Vec<(usize, usize)>>,
}

type Elem = Vec<i128>;

impl Multilinear {
    fn new(letters: &[usize], degree: usize) -> Self {
        let mut basis = vec![Vec::new()];
        let mut start = 0;
        for _ in 0..degree {
            let end = basis.len();
            for k in start..end {
                for &l in letters {
                    if !basis[k].contains(&l) {
                        let mut w = basis[k].clone();
                        w.push(l);
                        basis.push(w);
                    }
                }
            }
            start = end;
        }
        let index: HashMap<Vec<usize>, usize> =
            basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let table = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .enumerate()
                    .filter_map(|(b, wb)| {
                        let ab: Vec<usize> = a.iter().chain(wb).copied().collect();
                        index.get(&ab).map(|&c| (b, c))
                    })
                    .collect()
            })
            .collect();
        Multilinear { basis, index, table }
    }

    fn one(&self) -> Elem {
        let mut e = vec![0; self.basis.len()];
        e[0] = 1;
        e
    }

    /// `1 ± X_k`; the inverse of `1 + X_k` is `1 - X_k` since `X_k² = 0`.
    fn generator(&self, k: usize, positive: bool) -> Elem {
        let mut e = self.one();
        if let Some(&i) = self.index.get(&vec![k]) {
            e[i] = if positive { 1 } else { -1 };
        }
        e
    }

    fn mul(&self, p: &Elem, q: &Elem) -> Result<Elem> {
        let mut out = vec![0i128; p.len()];
        for (a, &x) in p.iter().enumerate().filter(|(_, x)| **x != 0) {
            for &(b, c) in &self.table[a] {
                if q[b] != 0 {
                    let t = x.checked_mul(q[b]).ok_or(Error::Overflow)?;
                    out[c] = out[c].checked_add(t).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    fn mul3(&self, p: &Elem, q: &Elem, r: &Elem) -> Result<Elem> {
        self.mul(&self.mul(p, q)?, r)
    }

    fn coefficient(&self, e: &Elem, word: &[usize]) -> Result<i64> {
        let c = self.index.get(word).map_or(0, |&i| e[i]);
        i64::try_from(c).map_err(|_| Error::Overflow)
    }
}

/// Images `x_i -> w_i x_p(i) w_i^-1` tracked as `(w_i, w_i^-1, p(i))` in a
/// quotient ring, letters of the braid taken from the last one: the image
/// of `x_i` under `s_k u` is the `s_k` formula with `x` replaced by images
/// under `u`. Word lengths of the Artin images grow exponentially for
/// generic braids, this stays linear in the braid length.
fn conjugators(b: &BraidWord, alg: &Multilinear) -> Result<Vec<(Elem, Elem, usize)>> {
    let m = b.strands();
    let mut state: Vec<(Elem, Elem, usize)> = (1..=m).map(|i| (alg.one(), alg.one(), i)).collect();
    let image = |s: &(Elem, Elem, usize), positive: bool| {
        alg.mul3(&s.0, &alg.generator(s.2, positive), &s.1)
    };
    for &(k, positive) in b.letters().iter().rev() {
        let (lo, hi) = (k - 1, k);
        if positive {
            // x_k -> x_k x_{k+1} x_k^-1, x_{k+1} -> x_k
            let w = alg.mul(&image(&state[lo], true)?, &state[hi].0)?;
            let winv = alg.mul(&state[hi].1, &image(&state[lo], false)?)?;
            let p = state[hi].2;
            state[hi] = std::mem::replace(&mut state[lo], (w, winv, p));
        } else {
            // x_k -> x_{k+1}, x_{k+1} -> x_{k+1}^-1 x_k x_{k+1}
            let w = alg.mul(&image(&state[hi], false)?, &state[lo].0)?;
            let winv = alg.mul(&state[lo].1, &image(&state[hi], true)?)?;
            let p = state[lo].2;
            state[lo] = std::mem::replace(&mut state[hi], (w, winv, p));
        }
    }
    Ok(state)
}

/// The Milnor invariant of a string link for a non-repeating index.
pub fn mu(s: &StringLinkPresentation, index: &[usize]) -> Result<i64> {
    let idx = MilnorIndex::new(index.to_vec(), s.n() + 1)?;
    let (head, j) = idx.split();
    let alg = Multilinear::new(head, head.len());
    let state = conjugators(s.braid().word(), &alg)?;
    alg.coefficient(&state[j - 1].0, head)
}

/// `mu(s, (σ(1), .., σ(n-1), n, n+1))`.
pub fn mu_sigma(s: &StringLinkPresentation, sigma: &Permutation) -> Result<i64> {
    if sigma.len() + 1 != s.n() {
        return Err(Error::InvalidPermutation(sigma.images().to_vec()));
    }
    mu(s, MilnorIndex::for_sigma(sigma)?.indices())
}

/// `Σ_σ mu_σ(s) t_σ` for a verified Brunnian string link.
pub fn milnor_vector(s: &StringLinkPresentation) -> Result<TreeVector> {
    if !s.is_verified_brunnian() {
        return Err(Error::NotBrunnian);
    }
    let n = s.n();
    let letters: Vec<usize> = (1..=n).collect();
    let alg = Multilinear::new(&letters, n);
    let lon = &conjugators(s.braid().word(), &alg)?[n].0;
    let mut v = TreeVector::zero(n);
    for (k, sigma) in Permutation::all(n - 1).iter().enumerate() {
        let mut head = sigma.images().to_vec();
        head.push(n);
        v.coords_mut()[k] = alg.coefficient(lon, &head)?;
    }
    Ok(v)
}

/// `mu` through the word longitude and the full Magnus expansion; slow on
/// long braids, kept as a cross-check.
pub fn mu_via_words(s: &StringLinkPresentation, index: &[usize]) -> Result<i64> {
    let idx = MilnorIndex::new(index.to_vec(), s.n() + 1)?;
    let (head, j) = idx.split();
    let lon = longitude(s, j)?;
    to_i64(magnus_expand(&lon, head.len())?.coefficient(head)?)
}
