//! Reduced words in a free group and the Artin action of braids on it.

use std::fmt;

use crate::braid::BraidWord;
use crate::error::{Error, Result};

/// A generator `x_i` or its inverse. Stored as a signed 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: usize, positive: bool) -> Self {
        let g = gen as i32;
        Letter(if positive { g } else { -g })
    }

    pub fn gen(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    pub fn exponent(self) -> i64 {
        self.0.signum() as i64
    }
}

/// A freely reduced word over `x_1, .., x_rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<Letter>,
}

/// Appends `l` to a reduced sequence, cancelling against the last letter.
fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Freely reduces a raw `(generator, sign)` sequence.
pub fn free_reduce<I>(letters: I, rank: usize) -> Result<FreeWord>
where
    I: IntoIterator<Item = (usize, i8)>,
{
    let mut out = Vec::new();
    for (g, s) in letters {
        if g == 0 || g > rank {
            return Err(Error::GeneratorOutOfRange { index: g, rank });
        }
        push_reduced(&mut out, Letter::new(g, s > 0));
    }
    Ok(FreeWord { rank, letters: out })
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        free_reduce([(i, 1)], rank)
    }

    /// Builds a word from letters that are already known to lie in range.
    pub(crate) fn from_letters(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out = Vec::new();
        for l in letters {
            debug_assert!(l.gen() >= 1 && l.gen() <= rank);
            push_reduced(&mut out, l);
        }
        FreeWord { rank, letters: out }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn mul(&self, other: &FreeWord) -> Result<FreeWord> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(FreeWord {
            rank: self.rank,
            letters: out,
        })
    }

    /// Total exponent of `x_gen`.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen() == gen)
            .map(|l| l.exponent())
            .sum()
    }

    /// Parses the debugging grammar: `x3` and `x3'` separated by whitespace.
    pub fn parse(text: &str, rank: usize) -> Result<FreeWord> {
        let mut raw = Vec::new();
        for tok in text.split_whitespace() {
            let (body, sign) = match tok.strip_suffix('\'') {
                Some(b) => (b, -1),
                None => (tok, 1),
            };
            let idx = body
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("bad free-group letter `{tok}`")))?;
            raw.push((idx, sign));
        }
        free_reduce(raw, rank)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.is_positive() {
                    format!("x{}", l.gen())
                } else {
                    format!("x{}'", l.gen())
                }
            })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// `a b a^-1 b^-1`, freely reduced.
pub fn commutator(a: &FreeWord, b: &FreeWord) -> Result<FreeWord> {
    a.mul(b)?.mul(&a.inverse())?.mul(&b.inverse())
}

/// An endomorphism of the free group, given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeGroupEndo {
    rank: usize,
    images: Vec<FreeWord>,
}

impl FreeGroupEndo {
    pub fn identity(rank: usize) -> Self {
        FreeGroupEndo {
            rank,
            images: (1..=rank)
                .map(|i| FreeWord::from_letters(rank, [Letter::new(i, true)]))
                .collect(),
        }
    }

    pub fn from_images(images: Vec<FreeWord>) -> Result<Self> {
        let rank = images.len();
        if let Some(w) = images.iter().find(|w| w.rank != rank) {
            return Err(Error::RankMismatch {
                left: rank,
                right: w.rank,
            });
        }
        Ok(FreeGroupEndo { rank, images })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    /// Image of `x_i`.
    pub fn image(&self, i: usize) -> &FreeWord {
        &self.images[i - 1]
    }

    pub fn apply(&self, w: &FreeWord) -> Result<FreeWord> {
        if w.rank != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: w.rank,
            });
        }
        let mut out = Vec::new();
        for &l in &w.letters {
            let img = &self.images[l.gen() - 1];
            if l.is_positive() {
                for &m in &img.letters {
                    push_reduced(&mut out, m);
                }
            } else {
                for &m in img.letters.iter().rev() {
                    push_reduced(&mut out, m.inverse());
                }
            }
        }
        Ok(FreeWord {
            rank: self.rank,
            letters: out,
        })
    }

    /// `self` first, then `next`: `x -> next(self(x))`.
    pub fn then(&self, next: &FreeGroupEndo) -> Result<FreeGroupEndo> {
        let images = self
            .images
            .iter()
            .map(|w| next.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeGroupEndo {
            rank: self.rank,
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, w)| {
            w.letters.len() == 1 && w.letters[0] == Letter::new(k + 1, true)
        })
    }
}

/// Applies the Artin automorphism of `s_i^{sign}` to a word, in place of
/// building the endomorphism explicitly.
fn artin_step(w: &FreeWord, i: usize, positive: bool) -> FreeWord {
    let xi = Letter::new(i, true);
    let xj = Letter::new(i + 1, true);
    let mut out = Vec::with_capacity(w.len() + 4);
    for &l in &w.letters {
        // images of the positive letters; inverses are reversed below
        let img: &[Letter] = match (l.gen(), positive) {
            // s_i: x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i
            (g, true) if g == i => &[xi, xj, xi.inverse()],
            (g, true) if g == i + 1 => &[xi],
            // s_i^-1: x_i -> x_{i+1}, x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}
            (g, false) if g == i => &[xj],
            (g, false) if g == i + 1 => &[xj.inverse(), xi, xj],
            _ => {
                push_reduced(&mut out, l);
                continue;
            }
        };
        if l.is_positive() {
            for &m in img {
                push_reduced(&mut out, m);
            }
        } else {
            for &m in img.iter().rev() {
                push_reduced(&mut out, m.inverse());
            }
        }
    }
    FreeWord {
        rank: w.rank,
        letters: out,
    }
}

/// The Artin action of a braid word; the first letter acts first.
pub fn artin_endo(braid: &BraidWord) -> FreeGroupEndo {
    let mut endo = FreeGroupEndo::identity(braid.strands());
    for &(i, positive) in braid.letters() {
        for img in &mut endo.images {
            *img = artin_step(img, i, positive);
        }
    }
    endo
}

/// Whether the braid is trivial; decided by faithfulness of the Artin action.
pub fn is_trivial_braid(braid: &BraidWord) -> bool {
    artin_endo(braid).is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str, rank: usize) -> FreeWord {
        FreeWord::parse(text, rank).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let r = free_reduce([(1, 1), (2, 1), (2, -1), (1, 1)], 2).unwrap();
        assert_eq!(r.to_string(), "x1 x1");
        assert!(free_reduce([], 2).unwrap().is_empty());
        assert!(free_reduce([(1, 1), (1, -1), (2, 1), (2, -1)], 2)
            .unwrap()
            .is_empty());
        assert_eq!(
            free_reduce([(3, 1)], 2),
            Err(Error::GeneratorOutOfRange { index: 3, rank: 2 })
        );
    }

    #[test]
    fn commutator_examples() {
        let x1 = w("x1", 2);
        let x2 = w("x2", 2);
        assert_eq!(commutator(&x1, &x2).unwrap().to_string(), "x1 x2 x1' x2'");
        assert!(commutator(&x1, &x1).unwrap().is_empty());
        // x1 x2 . x2 . x2' x1' . x2' = x1 x2 x1' x2'
        let c = commutator(&w("x1 x2", 2), &x2).unwrap();
        assert_eq!(c, w("x1 x2 x1' x2'", 2));
        assert!(commutator(&x1, &w("x1", 3)).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let word = w("x3 x1' x2", 3);
        assert_eq!(FreeWord::parse(&word.to_string(), 3).unwrap(), word);
        assert!(FreeWord::parse("y1", 3).is_err());
    }

    #[test]
    fn artin_generator() {
        let b = BraidWord::parse("s1", 2).unwrap();
        let e = artin_endo(&b);
        assert_eq!(e.image(1), &w("x1 x2 x1'", 2));
        assert_eq!(e.image(2), &w("x1", 2));
        assert!(artin_endo(&BraidWord::parse("s1 s1'", 2).unwrap()).is_identity());
    }

    #[test]
    fn artin_square_by_hand() {
        // s1 then s1, composing the definitional images step by step
        let e = artin_endo(&BraidWord::parse("s1 s1", 2).unwrap());
        assert_eq!(e.image(2), &w("x1 x2 x1'", 2));
        assert_eq!(e.image(1), &w("x1 x2 x1 x2' x1'", 2));
        let step = artin_endo(&BraidWord::parse("s1", 2).unwrap());
        assert_eq!(step.then(&step).unwrap(), e);
    }

    #[test]
    fn triviality() {
        assert!(is_trivial_braid(&BraidWord::parse("s1 s1'", 2).unwrap()));
        assert!(!is_trivial_braid(&BraidWord::parse("s1 s1", 2).unwrap()));
        assert!(is_trivial_braid(
            &BraidWord::parse("A(1,3) A(1,3)'", 3).unwrap()
        ));
        // braid relation s1 s2 s1 = s2 s1 s2
        assert!(is_trivial_braid(
            &BraidWord::parse("s1 s2 s1 s2' s1' s2'", 3).unwrap()
        ));
    }
}
