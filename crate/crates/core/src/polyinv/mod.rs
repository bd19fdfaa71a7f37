//! Conway polynomials and Conway-coefficient finite type invariants.
//!
//! Two independent engines: the Seifert-matrix determinant on closed braids
//! ([`seifert::conway`]) and skein recursion on PD codes
//! ([`skein::conway_skein`]).

pub mod seifert;
pub mod skein;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::braid::{closure_pd, BraidWord};
use crate::error::{Error, Result};
use crate::pd::PdCode;

pub use seifert::{conway, seifert_matrix, SeifertMatrix};
pub use skein::{conway_skein, DEFAULT_CROSSING_LIMIT};

/// `∇(z) = Σ a_k z^k`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ConwayPoly(Vec<BigInt>);

impl ConwayPoly {
    pub fn zero() -> Self {
        ConwayPoly(Vec::new())
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ConwayPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    /// `a_k`.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn to_i64_vec(&self) -> Result<Vec<i64>> {
        self.0.iter().map(|c| c.to_i64().ok_or(Error::Overflow)).collect()
    }

    /// For an `m`-component link, `a_k = 0` unless `k ≥ m - 1` and
    /// `k ≡ m - 1 (mod 2)`.
    pub fn satisfies_support(&self, components: usize) -> bool {
        self.0.iter().enumerate().all(|(k, c)| {
            c.is_zero() || (k + 1 >= components && (k + 1 - components).is_multiple_of(2))
        })
    }

    /// JSON integer array `[a_0, a_1, ..]`.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self.0.iter().map(BigInt::to_string).collect();
        format!("[{}]", body.join(","))
    }

    /// Parses the output of [`ConwayPoly::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad coefficient array `{text}`"));
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Ok(Self::zero());
        }
        inner
            .split(',')
            .map(|c| c.trim().parse::<BigInt>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()
            .map(Self::from_coeffs)
    }
}

impl fmt::Display for ConwayPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}z"),
                _ => format!("{c}z^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Which Conway engine evaluates a functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Determinant,
    Skein,
}

impl Engine {
    pub fn tag(self) -> &'static str {
        match self {
            Engine::Determinant => "seifert-det",
            Engine::Skein => "skein",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    ConwayCoeff(usize),
    Constant(i64),
}

/// Where Conway polynomials of closed braids come from; lets callers put a
/// cache in front of the engines.
pub trait ConwaySource: Sync {
    fn conway(&self, b: &BraidWord, engine: Engine) -> Result<ConwayPoly>;
}

/// Computes every polynomial afresh.
#[derive(Debug, Clone, Copy, Default)]
pub struct Direct;

impl ConwaySource for Direct {
    fn conway(&self, b: &BraidWord, engine: Engine) -> Result<ConwayPoly> {
        match engine {
            Engine::Determinant => conway(b),
            Engine::Skein => conway_skein(&closure_pd(b), DEFAULT_CROSSING_LIMIT),
        }
    }
}

/// An integer-valued link invariant with a declared Vassiliev degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFunctional {
    name: String,
    degree: usize,
    kind: Kind,
    engine: Engine,
}

/// `L -> a_k(∇(L))`, a finite type invariant of degree `k`.
pub fn coeff_invariant(k: usize) -> InvariantFunctional {
    InvariantFunctional {
        name: format!("conway:a{k}"),
        degree: k,
        kind: Kind::ConwayCoeff(k),
        engine: Engine::Determinant,
    }
}

impl InvariantFunctional {
    /// A constant functional (degree 0).
    pub fn constant(value: i64) -> Self {
        InvariantFunctional {
            name: format!("const:{value}"),
            degree: 0,
            kind: Kind::Constant(value),
            engine: Engine::Determinant,
        }
    }

    /// Parses `conway:a<k>` or `const:<v>`.
    pub fn parse(name: &str) -> Result<Self> {
        if let Some(k) = name.strip_prefix("conway:a") {
            return k
                .parse()
                .map(coeff_invariant)
                .map_err(|_| Error::UnknownInvariant(name.into()));
        }
        if let Some(v) = name.strip_prefix("const:") {
            return v
                .parse()
                .map(Self::constant)
                .map_err(|_| Error::UnknownInvariant(name.into()));
        }
        Err(Error::UnknownInvariant(name.into()))
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// The Conway coefficient index, if this is a Conway functional.
    pub fn conway_index(&self) -> Option<usize> {
        match self.kind {
            Kind::ConwayCoeff(k) => Some(k),
            Kind::Constant(_) => None,
        }
    }

    /// Reads the value off an already computed Conway polynomial.
    pub fn from_conway(&self, p: &ConwayPoly) -> Result<i64> {
        match self.kind {
            Kind::ConwayCoeff(k) => p.coeff(k).to_i64().ok_or(Error::Overflow),
            Kind::Constant(v) => Ok(v),
        }
    }

    /// Value on the closure of `b`.
    pub fn evaluate_braid(&self, b: &BraidWord) -> Result<i64> {
        self.evaluate_braid_with(b, &Direct)
    }

    pub fn evaluate_braid_with(&self, b: &BraidWord, src: &dyn ConwaySource) -> Result<i64> {
        match self.kind {
            Kind::Constant(v) => Ok(v),
            Kind::ConwayCoeff(_) => self.from_conway(&src.conway(b, self.engine)?),
        }
    }

    /// Value on a PD code, through the skein engine.
    pub fn evaluate_pd(&self, pd: &PdCode) -> Result<i64> {
        match self.kind {
            Kind::Constant(v) => Ok(v),
            Kind::ConwayCoeff(_) => self.from_conway(&conway_skein(pd, DEFAULT_CROSSING_LIMIT)?),
        }
    }
}
