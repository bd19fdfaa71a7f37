//! Milnor's string links `β_σ`, stacking, closures, the four-link bracket
//! family and randomized Brunnian families.
//!
//! `β_σ` is the right-normed iterated commutator
//! `[A(σ1,n+1), [A(σ2,n+1), .. [A(σ(n-1),n+1), A(n,n+1)]]]`. Its last
//! longitude is the matching commutator of meridians, whose Magnus expansion
//! has exactly one monomial ending in `X_n`, namely `X_σ1 .. X_σ(n-1) X_n`.
//! Hence `mu_τ(β_σ) = δ_στ`. The left-normed bracketing and the inverse
//! orientation were also tried and fail this duality (see tests).

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::braid::{closure_pd, expand_pure_generator, PureBraid, StringLinkPresentation};
use crate::error::{Error, Result};
use crate::milnor::milnor_vector;
use crate::pd::PdCode;
use crate::perm::Permutation;
use crate::treealg::TreeVector;

/// How the iterated commutator defining `β_σ` is bracketed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bracketing {
    /// `[a1, [a2, .. [a_k, b]]]`
    RightNormed,
    /// `[[..[a1, a2], ..], a_k], b]`
    LeftNormed,
}

/// Builds a candidate `β_σ` under a bracketing and orientation convention.
pub fn commutator_string_link(
    n: usize,
    sigma: &Permutation,
    bracketing: Bracketing,
    inverted: bool,
) -> Result<PureBraid> {
    if n == 0 || sigma.len() + 1 != n {
        return Err(Error::InvalidPermutation(sigma.images().to_vec()));
    }
    let m = n + 1;
    let last = expand_pure_generator(n, m, m)?;
    let teeth = sigma
        .images()
        .iter()
        .map(|&i| expand_pure_generator(i, m, m))
        .collect::<Result<Vec<_>>>()?;
    let b = match bracketing {
        Bracketing::RightNormed => teeth
            .iter()
            .rev()
            .try_fold(last, |acc, a| PureBraid::commutator(a, &acc))?,
        Bracketing::LeftNormed => match teeth.split_first() {
            None => last,
            Some((first, rest)) => {
                let inner = rest
                    .iter()
                    .try_fold(first.clone(), |acc, a| PureBraid::commutator(&acc, a))?;
                PureBraid::commutator(&inner, &last)?
            }
        },
    };
    Ok(if inverted { b.inverse() } else { b })
}

/// Milnor's string link `β_σ`, verified Brunnian. For `n = 1` this is the
/// Hopf string link `A(1,2)`.
pub fn milnor_string_link(n: usize, sigma: &Permutation) -> Result<StringLinkPresentation> {
    let b = commutator_string_link(n, sigma, Bracketing::RightNormed, false)?;
    let s = StringLinkPresentation::checked(b)?;
    debug_assert!(s.is_verified_brunnian());
    Ok(s)
}

/// Stacks `a` on top of `b` and re-runs the Brunnian check.
pub fn stack(a: &StringLinkPresentation, b: &StringLinkPresentation) -> Result<StringLinkPresentation> {
    StringLinkPresentation::checked(a.braid().concat(b.braid())?)
}

pub fn closure(s: &StringLinkPresentation) -> PdCode {
    closure_pd(s.braid().word())
}

/// The four string links whose closures realize the bracket of two tree
/// claspers on the unlink: `(U, β_σ, β_σ', β_σ β_σ')`.
pub fn scheme_family(
    n: usize,
    sigma: &Permutation,
    sigma2: &Permutation,
) -> Result<[StringLinkPresentation; 4]> {
    let a = milnor_string_link(n, sigma)?;
    let b = milnor_string_link(n, sigma2)?;
    let ab = stack(&a, &b)?;
    Ok([StringLinkPresentation::identity(n), a, b, ab])
}

/// PD codes of the closures of [`scheme_family`].
pub fn scheme_family_pd(n: usize, sigma: &Permutation, sigma2: &Permutation) -> Result<[PdCode; 4]> {
    Ok(scheme_family(n, sigma, sigma2)?.map(|s| closure(&s)))
}

/// A random pure braid on `strands` strands: `len` pure generators with
/// random signs.
pub fn random_pure_braid(strands: usize, seed: u64, len: usize) -> Result<PureBraid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = PureBraid::identity(strands);
    if strands < 2 {
        return Ok(b);
    }
    for _ in 0..len {
        let j = rng.gen_range(2..=strands);
        let i = rng.gen_range(1..j);
        let a = expand_pure_generator(i, j, strands)?;
        let a = if rng.gen_bool(0.5) { a } else { a.inverse() };
        b = b.concat(&a)?;
    }
    Ok(b)
}

/// One construction in a family spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// `β_σ^k` for `k` in `kmin..=kmax`.
    Powers { sigma: Permutation, kmin: i64, kmax: i64 },
    /// `Π β_σi^ki`.
    Mix(Vec<(Permutation, i64)>),
    /// `g β_σ g^-1` for a random pure braid `g`.
    Conj { sigma: Permutation, seed: u64, len: usize },
    /// `β_σ g β_σ^-1 g^-1`, whose Milnor vector vanishes.
    Cancel { sigma: Permutation, seed: u64, len: usize },
    /// The trivial string link.
    Unlink,
}

/// A whitespace- or `;`-separated list of constructions:
/// `powers:<σ>:<kmin>..<kmax>`, `mix:<σ1>^<k1>,<σ2>^<k2>`,
/// `conj:<σ>:<seed>:<len>`, `cancel:<σ>:<seed>:<len>`, `unlink`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FamilySpec(pub Vec<Construction>);

fn bad(item: &str) -> Error {
    Error::Parse(format!("bad family item `{item}`"))
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for item in s.split(|c: char| c == ';' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = item.split(':').collect();
            let perm = |t: &str| t.parse::<Permutation>().map_err(|_| bad(item));
            let num = |t: &str| t.parse::<u64>().map_err(|_| bad(item));
            let c = match parts[..] {
                ["powers", sigma, range] => {
                    let (lo, hi) = range.split_once("..").ok_or_else(|| bad(item))?;
                    let kmin = lo.parse().map_err(|_| bad(item))?;
                    let kmax = hi.parse().map_err(|_| bad(item))?;
                    if kmin > kmax {
                        return Err(bad(item));
                    }
                    Construction::Powers {
                        sigma: perm(sigma)?,
                        kmin,
                        kmax,
                    }
                }
                ["mix", factors] => {
                    let fs = factors
                        .split(',')
                        .map(|f| {
                            let (p, k) = f.split_once('^').ok_or_else(|| bad(item))?;
                            Ok((perm(p)?, k.parse::<i64>().map_err(|_| bad(item))?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Construction::Mix(fs)
                }
                ["conj", sigma, seed, len] => Construction::Conj {
                    sigma: perm(sigma)?,
                    seed: num(seed)?,
                    len: num(len)? as usize,
                },
                ["cancel", sigma, seed, len] => Construction::Cancel {
                    sigma: perm(sigma)?,
                    seed: num(seed)?,
                    len: num(len)? as usize,
                },
                ["unlink"] => Construction::Unlink,
                _ => return Err(bad(item)),
            };
            out.push(c);
        }
        Ok(FamilySpec(out))
    }
}

#[derive(Debug, Clone)]
pub struct FamilyEntry {
    pub label: String,
    pub link: StringLinkPresentation,
    pub pd: PdCode,
    pub milnor: TreeVector,
}

/// Brunnian presentations with cached closures and Milnor vectors.
#[derive(Debug, Clone)]
pub struct LinkFamily {
    pub n: usize,
    pub entries: Vec<FamilyEntry>,
}

impl LinkFamily {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Builds a family from labeled presentations, rejecting any entry that
    /// fails the Brunnian check.
    pub fn from_links(n: usize, links: Vec<(String, StringLinkPresentation)>) -> Result<Self> {
        let entries = links
            .into_par_iter()
            .map(|(label, link)| {
                if link.n() != n {
                    return Err(Error::StrandMismatch {
                        left: n + 1,
                        right: link.n() + 1,
                    });
                }
                let link = link.verify();
                if !link.is_verified_brunnian() {
                    return Err(Error::FamilyNotBrunnian { label });
                }
                let milnor = milnor_vector(&link)?;
                let pd = closure(&link);
                Ok(FamilyEntry {
                    label,
                    link,
                    pd,
                    milnor,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinkFamily { n, entries })
    }
}

fn construction_links(
    n: usize,
    c: &Construction,
) -> Result<Vec<(String, StringLinkPresentation)>> {
    let beta = |s: &Permutation| milnor_string_link(n, s);
    let raw = |b: PureBraid| StringLinkPresentation::new(b);
    Ok(match c {
        Construction::Powers { sigma, kmin, kmax } => {
            let b = beta(sigma)?;
            (*kmin..=*kmax)
                .map(|k| Ok((format!("powers:{sigma}:{k}"), raw(b.braid().pow(k))?)))
                .collect::<Result<Vec<_>>>()?
        }
        Construction::Mix(factors) => {
            let mut acc = PureBraid::identity(n + 1);
            for (s, k) in factors {
                acc = acc.concat(&beta(s)?.braid().pow(*k))?;
            }
            let body: Vec<String> = factors.iter().map(|(s, k)| format!("{s}^{k}")).collect();
            vec![(format!("mix:{}", body.join(",")), raw(acc)?)]
        }
        Construction::Conj { sigma, seed, len } => {
            let g = random_pure_braid(n + 1, *seed, *len)?;
            let b = beta(sigma)?.braid().conjugate_by(&g)?;
            vec![(format!("conj:{sigma}:{seed}:{len}"), raw(b)?)]
        }
        Construction::Cancel { sigma, seed, len } => {
            let g = random_pure_braid(n + 1, *seed, *len)?;
            let b = beta(sigma)?;
            let inv = b.braid().inverse().conjugate_by(&g)?;
            vec![(
                format!("cancel:{sigma}:{seed}:{len}"),
                raw(b.braid().concat(&inv)?)?,
            )]
        }
        Construction::Unlink => vec![("unlink".to_string(), StringLinkPresentation::identity(n))],
    })
}

/// Builds the family described by `spec` on `n + 1` strands.
pub fn family_generators(n: usize, spec: &FamilySpec) -> Result<LinkFamily> {
    let mut links = Vec::new();
    for c in &spec.0 {
        links.extend(construction_links(n, c)?);
    }
    LinkFamily::from_links(n, links)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::{mu, mu_sigma};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn duality_holds(n: usize, br: Bracketing, inv: bool) -> bool {
        let perms = Permutation::all(n - 1);
        perms.iter().all(|tau| {
            let b = commutator_string_link(n, tau, br, inv).unwrap();
            let s = StringLinkPresentation::checked(b).unwrap();
            perms
                .iter()
                .all(|sigma| mu_sigma(&s, sigma).unwrap() == i64::from(sigma == tau))
        })
    }

    #[test]
    fn calibration_selects_right_normed() {
        for n in [2, 3] {
            assert!(duality_holds(n, Bracketing::RightNormed, false));
            assert!(!duality_holds(n, Bracketing::RightNormed, true));
            assert!(!duality_holds(n, Bracketing::LeftNormed, true));
        }
        // left-normed agrees with right-normed up to n = 2 but not at n = 3
        assert!(duality_holds(2, Bracketing::LeftNormed, false));
        assert!(!duality_holds(3, Bracketing::LeftNormed, false));
    }

    #[test]
    fn borromean_string_link() {
        let b = milnor_string_link(2, &p("1")).unwrap();
        assert_eq!(b.braid().word().len(), 12);
        assert!(b.is_verified_brunnian());
        assert_eq!(mu(&b, &[1, 2, 3]).unwrap(), 1);
        let b12 = milnor_string_link(3, &p("21")).unwrap();
        assert_eq!(mu_sigma(&b12, &p("12")).unwrap(), 0);
        let hopf = milnor_string_link(1, &p("e")).unwrap();
        assert_eq!(hopf.braid().word().len(), 2);
    }

    #[test]
    fn stacking() {
        let b = milnor_string_link(2, &p("1")).unwrap();
        assert_eq!(stack(&b, &StringLinkPresentation::identity(2)).unwrap(), b);
        let bb = stack(&b, &b).unwrap();
        assert_eq!(milnor_vector(&bb).unwrap().coords(), &[2]);
        assert!(milnor_vector(&stack(&b, &b.inverse()).unwrap()).unwrap().is_zero());
        assert!(stack(&b, &StringLinkPresentation::identity(3)).is_err());
    }

    #[test]
    fn closures() {
        let unlink = closure(&StringLinkPresentation::identity(2));
        assert_eq!((unlink.components, unlink.crossings.len()), (3, 0));
        let b = milnor_string_link(2, &p("1")).unwrap();
        assert_eq!(closure(&b).crossings.len(), 12);
        let bb = closure(&stack(&b, &b).unwrap());
        assert_eq!((bb.components, bb.crossings.len()), (3, 24));
    }

    #[test]
    fn scheme_quadruple() {
        let [u, a, b, ab] = scheme_family_pd(2, &p("1"), &p("1")).unwrap();
        assert!(u.crossings.is_empty());
        assert_eq!(a, b);
        assert_eq!(ab.crossings.len(), 24);
        let links = scheme_family(3, &p("12"), &p("21")).unwrap();
        assert_eq!(milnor_vector(&links[3]).unwrap().coords(), &[1, 1]);
    }

    #[test]
    fn spec_grammar() {
        let spec: FamilySpec = "powers:1:-2..2; conj:1:7:3 mix:12^1,21^-2 cancel:21:1:2 unlink"
            .parse()
            .unwrap();
        assert_eq!(spec.0.len(), 5);
        assert!("powers:1:2..-2".parse::<FamilySpec>().is_err());
        assert!("powers:1".parse::<FamilySpec>().is_err());
        assert!("conj:1:x:3".parse::<FamilySpec>().is_err());
        assert!("frobnicate".parse::<FamilySpec>().is_err());
        assert!("".parse::<FamilySpec>().unwrap().0.is_empty());
    }

    #[test]
    fn families() {
        let fam = family_generators(2, &"powers:1:-2..2".parse().unwrap()).unwrap();
        let mus: Vec<i64> = fam.entries.iter().map(|e| e.milnor.coords()[0]).collect();
        assert_eq!(mus, vec![-2, -1, 0, 1, 2]);
        assert!(family_generators(2, &FamilySpec::default()).unwrap().is_empty());
        let conj = family_generators(2, &"conj:1:11:4 cancel:1:5:3".parse().unwrap()).unwrap();
        assert_eq!(conj.entries[0].milnor.coords(), &[1]);
        assert_eq!(conj.entries[1].milnor.coords(), &[0]);
        assert!(conj.entries.iter().all(|e| e.pd.components == 3));
    }

    #[test]
    fn non_brunnian_entries_are_rejected() {
        let a12 = StringLinkPresentation::new(expand_pure_generator(1, 2, 3).unwrap()).unwrap();
        let err = LinkFamily::from_links(2, vec![("a12".into(), a12)]).unwrap_err();
        assert_eq!(err, Error::FamilyNotBrunnian { label: "a12".into() });
    }
}
