//! Quadratic form coefficients of a degree-`2n` invariant on Brunnian links
//! and their verification over families.
//!
//! For `σ, σ'` in `S_{n-1}` the bracket is the alternating sum
//! `f(U) - f(L_σ) - f(L_σ') + f(L_σσ')` over the closures of the identity,
//! `β_σ`, `β_σ'` and the stacking `β_σ β_σ'`. Coefficients are
//! `f_σσ = bracket(σ, σ) / 2`, `f_σσ' = bracket(σ, σ')` when `σ < σ'` and zero
//! below the diagonal, in lexicographic order. The prediction for a link `L`
//! is then `f(L) - f(U) = Σ f_σσ' μ_σ(L) μ_σ'(L)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{closure_pd, BraidWord};
use crate::error::{Error, Result};
use crate::generators::{scheme_family, LinkFamily};
use crate::perm::Permutation;
use crate::polyinv::{ConwayPoly, ConwaySource, Direct, Engine, InvariantFunctional};
use crate::treealg::TreeVector;

/// `f_σσ'` over `S_{n-1}` in lexicographic order, upper triangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFormMatrix {
    n: usize,
    order: Vec<Permutation>,
    entries: Vec<Vec<i64>>,
    invariant: String,
}

impl QuadraticFormMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &[Permutation] {
        &self.order
    }

    pub fn invariant(&self) -> &str {
        &self.invariant
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn get(&self, a: &Permutation, b: &Permutation) -> Option<i64> {
        let i = self.order.iter().position(|p| p == a)?;
        let j = self.order.iter().position(|p| p == b)?;
        Some(self.entries[i][j])
    }

    /// The diagonal entry at the identity; for `n = 2` this is the single
    /// constant `c` of `f(L) - f(U) = c μ(123)²`.
    pub fn calibration(&self) -> i64 {
        self.entries.first().and_then(|r| r.first()).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&v| v == 0)
    }

    /// `Σ_{σ ≤ σ'} f_σσ' x_σ x_σ'`.
    pub fn predict(&self, x: &TreeVector) -> Result<i64> {
        let c = x.coords();
        if c.len() != self.order.len() {
            return Err(Error::StrandMismatch {
                left: self.n + 1,
                right: x.degree() + 1,
            });
        }
        let mut total: i64 = 0;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, &f) in row.iter().enumerate().skip(i) {
                let term = f
                    .checked_mul(c[i])
                    .and_then(|v| v.checked_mul(c[j]))
                    .ok_or(Error::Overflow)?;
                total = total.checked_add(term).ok_or(Error::Overflow)?;
            }
        }
        Ok(total)
    }

    /// Upper-triangular entries keyed `"σ|σ'"`.
    pub fn coefficient_map(&self) -> BTreeMap<String, i64> {
        let mut out = BTreeMap::new();
        for (i, a) in self.order.iter().enumerate() {
            for (j, b) in self.order.iter().enumerate().skip(i) {
                out.insert(format!("{a}|{b}"), self.entries[i][j]);
            }
        }
        out
    }
}

fn poly(engine: Engine, b: &BraidWord) -> Result<ConwayPoly> {
    Direct.conway(b, engine)
}

/// `f(U) - f(L_σ) - f(L_σ') + f(closure(β_σ β_σ'))`.
pub fn bracket_value(f: &InvariantFunctional, n: usize, sigma: &Permutation, sigma2: &Permutation) -> Result<i64> {
    bracket_value_with(f, n, sigma, sigma2, &Direct)
}

pub fn bracket_value_with(
    f: &InvariantFunctional,
    n: usize,
    sigma: &Permutation,
    sigma2: &Permutation,
    src: &dyn ConwaySource,
) -> Result<i64> {
    let links = scheme_family(n, sigma, sigma2)?;
    let values = links
        .par_iter()
        .map(|s| f.evaluate_braid_with(s.braid().word(), src))
        .collect::<Result<Vec<_>>>()?;
    Ok(values[0] - values[1] - values[2] + values[3])
}

fn odd_diagonal_report(f: &InvariantFunctional, n: usize, sigma: &Permutation) -> String {
    let Ok(links) = scheme_family(n, sigma, sigma) else {
        return String::from("scheme family unavailable");
    };
    let show = |r: Result<ConwayPoly>| match r {
        Ok(p) => p.to_json(),
        Err(e) => format!("error: {e}"),
    };
    let parts: Vec<String> = links
        .iter()
        .map(|s| {
            let w = s.braid().word();
            format!(
                "braid `{w}` pd {} det {} skein {}",
                closure_pd(w).to_json(),
                show(poly(Engine::Determinant, w)),
                show(poly(Engine::Skein, w)),
            )
        })
        .collect();
    format!("{}: {}", f.name(), parts.join("; "))
}

fn fit_from(
    n: usize,
    invariant: &str,
    bracket: impl Fn(&Permutation, &Permutation) -> Result<i64> + Sync,
    diagnose: impl Fn(&Permutation) -> String,
) -> Result<QuadraticFormMatrix> {
    let order = Permutation::all(n.saturating_sub(1));
    let k = order.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| bracket(&order[i], &order[j]))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = vec![vec![0i64; k]; k];
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        if i == j {
            if v % 2 != 0 {
                return Err(Error::OddDiagonal {
                    sigma: order[i].to_string(),
                    value: v,
                    diagnostics: diagnose(&order[i]),
                });
            }
            entries[i][j] = v / 2;
        } else {
            entries[i][j] = v;
        }
    }
    Ok(QuadraticFormMatrix {
        n,
        order,
        entries,
        invariant: invariant.to_string(),
    })
}

/// Fits `f_σσ'` from brackets. An odd diagonal bracket is an error carrying
/// the four braid words, their PD codes and both Conway evaluations.
pub fn fit_coefficients(f: &InvariantFunctional, n: usize) -> Result<QuadraticFormMatrix> {
    fit_coefficients_with(f, n, &Direct)
}

pub fn fit_coefficients_with(
    f: &InvariantFunctional,
    n: usize,
    src: &dyn ConwaySource,
) -> Result<QuadraticFormMatrix> {
    fit_from(
        n,
        f.name(),
        |a, b| bracket_value_with(f, n, a, b, src),
        |s| odd_diagonal_report(f, n, s),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    /// `μ_σ(L)` keyed by `σ`.
    pub mu: BTreeMap<String, i64>,
    /// `f(L)`, absent if the evaluator failed.
    pub f: Option<i64>,
    pub f_unlink: i64,
    /// Predicted `f(L) - f(U)`.
    pub predicted: i64,
    #[serde(rename = "match")]
    pub matched: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub pass: usize,
    pub fail: usize,
    /// Rows whose evaluation failed; counted in `fail` as well.
    pub incomplete: usize,
    pub invariant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

/// One checked row per link. The coefficients are one valid choice, not
/// the only one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub invariant: String,
    pub n: usize,
    pub order: Vec<String>,
    pub coefficients: BTreeMap<String, i64>,
    pub rows: Vec<ReportRow>,
    pub summary: ReportSummary,
}

impl VerificationReport {
    fn assemble(
        invariant: String,
        n: usize,
        coefficients: BTreeMap<String, i64>,
        calibration: Option<i64>,
        rows: Vec<ReportRow>,
    ) -> Self {
        let pass = rows.iter().filter(|r| r.matched).count();
        let incomplete = rows.iter().filter(|r| r.f.is_none()).count();
        VerificationReport {
            summary: ReportSummary {
                pass,
                fail: rows.len() - pass,
                incomplete,
                invariant: invariant.clone(),
                calibration,
                family: None,
            },
            invariant,
            n,
            order: Permutation::all(n.saturating_sub(1)).iter().map(ToString::to_string).collect(),
            coefficients,
            rows,
        }
    }

    pub fn with_family_spec(mut self, spec: &str) -> Self {
        self.summary.family = Some(spec.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn mu_map(x: &TreeVector) -> BTreeMap<String, i64> {
    x.basis()
        .iter()
        .zip(x.coords())
        .map(|(s, &v)| (s.to_string(), v))
        .collect()
}

/// Checks `f(L) - f(U) = Σ f_σσ' μ_σ μ_σ'` on every family member against
/// an already fitted matrix.
pub fn verify_with(
    q: &QuadraticFormMatrix,
    f: &InvariantFunctional,
    family: &LinkFamily,
) -> Result<VerificationReport> {
    verify_with_source(q, f, family, &Direct)
}

pub fn verify_with_source(
    q: &QuadraticFormMatrix,
    f: &InvariantFunctional,
    family: &LinkFamily,
    src: &dyn ConwaySource,
) -> Result<VerificationReport> {
    if family.n != q.n {
        return Err(Error::StrandMismatch {
            left: q.n + 1,
            right: family.n + 1,
        });
    }
    let f_unlink = f.evaluate_braid_with(&BraidWord::identity(q.n + 1), src)?;
    let rows = family
        .entries
        .par_iter()
        .map(|e| {
            let predicted = q.predict(&e.milnor)?;
            let value = f.evaluate_braid_with(e.link.braid().word(), src);
            Ok(ReportRow {
                label: e.label.clone(),
                mu: mu_map(&e.milnor),
                f: value.as_ref().ok().copied(),
                f_unlink,
                predicted,
                matched: matches!(value, Ok(v) if v - f_unlink == predicted),
                error: value.err().map(|e| e.to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::assemble(
        f.name().to_string(),
        q.n,
        q.coefficient_map(),
        Some(q.calibration()),
        rows,
    ))
}

/// Fits the coefficients of `f` and verifies them over `family`.
pub fn verify_eq8(f: &InvariantFunctional, n: usize, family: &LinkFamily) -> Result<VerificationReport> {
    let q = fit_coefficients(f, n)?;
    verify_with(&q, f, family)
}

/// Checks `a_d(L) = a_d(U)` for each listed degree `d < 2n`. Degrees where
/// `a_d` vanishes identically on `(n+1)`-component links are refused.
pub fn vanishing_check(n: usize, family: &LinkFamily, degrees: &[usize]) -> Result<VerificationReport> {
    vanishing_check_with(n, family, degrees, &Direct)
}

pub fn vanishing_check_with(
    n: usize,
    family: &LinkFamily,
    degrees: &[usize],
    src: &dyn ConwaySource,
) -> Result<VerificationReport> {
    let components = n + 1;
    for &d in degrees {
        if d >= 2 * n {
            return Err(Error::DegreeNotBelow { degree: d, bound: 2 * n });
        }
        if d < n || !(d - n).is_multiple_of(2) {
            return Err(Error::ParityImpossible { degree: d, components });
        }
    }
    if family.n != n {
        return Err(Error::StrandMismatch {
            left: components,
            right: family.n + 1,
        });
    }
    let unlink = src.conway(&BraidWord::identity(components), Engine::Determinant)?;
    let evaluated: Vec<Result<ConwayPoly>> = family
        .entries
        .par_iter()
        .map(|e| src.conway(e.link.braid().word(), Engine::Determinant))
        .collect();
    let mut rows = Vec::new();
    for (e, p) in family.entries.iter().zip(&evaluated) {
        for &d in degrees {
            let f_unlink = i64::try_from(unlink.coeff(d)).map_err(|_| Error::Overflow)?;
            let value = p
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|p| i64::try_from(p.coeff(d)).map_err(|_| Error::Overflow));
            rows.push(ReportRow {
                label: format!("{} a{d}", e.label),
                mu: mu_map(&e.milnor),
                f: value.as_ref().ok().copied(),
                f_unlink,
                predicted: 0,
                matched: matches!(value, Ok(v) if v == f_unlink),
                error: value.err().map(|e| e.to_string()),
            });
        }
    }
    let names: Vec<String> = degrees.iter().map(|d| format!("conway:a{d}")).collect();
    Ok(VerificationReport::assemble(
        names.join(","),
        n,
        BTreeMap::new(),
        None,
        rows,
    ))
}
