//! Braid words, pure braids and string-link presentations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::is_trivial_braid;
use crate::pd::{PdCode, PdCrossing};
use crate::perm::Permutation;

/// A word in the Artin generators `s_1, .., s_{m-1}` on `m` strands.
///
/// Letters are `(i, positive)`; a positive letter is a positive crossing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<(usize, bool)>,
}

impl BraidWord {
    pub fn identity(strands: usize) -> Self {
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn new(strands: usize, letters: Vec<(usize, bool)>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::StrandOutOfRange { strand: 0, strands });
        }
        for &(i, _) in &letters {
            if i == 0 || i >= strands {
                return Err(Error::BraidGeneratorOutOfRange { index: i, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[(usize, bool)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&(i, s)| (i, !s)).collect(),
        }
    }

    /// Concatenation; `self` is on top.
    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    /// `g self g^-1`.
    pub fn conjugate_by(&self, g: &BraidWord) -> Result<Self> {
        g.concat(self)?.concat(&g.inverse())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// Adds a strand on the right and appends `s_m^{±1}` (Markov stabilization).
    pub fn stabilize(&self, positive: bool) -> Self {
        let mut letters = self.letters.clone();
        letters.push((self.strands, positive));
        BraidWord {
            strands: self.strands + 1,
            letters,
        }
    }

    /// Parses whitespace-separated `s<i>`, `s<i>'`, `A(<i>,<j>)` and
    /// `A(<i>,<j>)'` tokens.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in tokenize(text) {
            let (body, inverse) = match tok.strip_suffix('\'') {
                Some(b) => (b, true),
                None => (tok.as_str(), false),
            };
            if let Some(idx) = body.strip_prefix('s') {
                let i: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad braid letter `{tok}`")))?;
                letters.push((i, !inverse));
            } else if let Some(args) = body.strip_prefix("A(").and_then(|r| r.strip_suffix(')')) {
                let parts: Vec<&str> = args.split(',').map(str::trim).collect();
                let [i, j] = parts[..] else {
                    return Err(Error::Parse(format!("bad pure generator `{tok}`")));
                };
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad pure generator `{tok}`")))
                };
                let a = expand_pure_generator(parse(i)?, parse(j)?, strands)?;
                let a = if inverse { a.0.inverse() } else { a.0 };
                letters.extend_from_slice(&a.letters);
            } else {
                return Err(Error::Parse(format!("bad braid token `{tok}`")));
            }
        }
        BraidWord::new(strands, letters)
    }
}

/// Splits on whitespace, keeping `A( i , j )` together.
fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .letters
            .iter()
            .map(|&(i, s)| if s { format!("s{i}") } else { format!("s{i}'") })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// The permutation induced on strands: the strand entering at position `p`
/// leaves at position `permutation_of(b).apply(p)`.
pub fn permutation_of(b: &BraidWord) -> Permutation {
    // at[position] = starting position of the strand currently there
    let mut at: Vec<usize> = (1..=b.strands).collect();
    for &(i, _) in &b.letters {
        at.swap(i - 1, i);
    }
    let mut images = vec![0; b.strands];
    for (pos, &start) in at.iter().enumerate() {
        images[start - 1] = pos + 1;
    }
    Permutation::new(images).expect("braid permutation is a bijection")
}

/// A braid word whose permutation is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PureBraid(BraidWord);

impl PureBraid {
    pub fn new(b: BraidWord) -> Result<Self> {
        if permutation_of(&b).is_identity() {
            Ok(PureBraid(b))
        } else {
            Err(Error::NotPure)
        }
    }

    pub fn identity(strands: usize) -> Self {
        PureBraid(BraidWord::identity(strands))
    }

    pub fn word(&self) -> &BraidWord {
        &self.0
    }

    pub fn into_word(self) -> BraidWord {
        self.0
    }

    pub fn strands(&self) -> usize {
        self.0.strands
    }

    pub fn inverse(&self) -> Self {
        PureBraid(self.0.inverse())
    }

    pub fn concat(&self, other: &PureBraid) -> Result<Self> {
        Ok(PureBraid(self.0.concat(&other.0)?))
    }

    pub fn conjugate_by(&self, g: &PureBraid) -> Result<Self> {
        Ok(PureBraid(self.0.conjugate_by(&g.0)?))
    }

    pub fn pow(&self, k: i64) -> Self {
        PureBraid(self.0.pow(k))
    }

    /// Commutator `a b a^-1 b^-1` in the pure braid group.
    pub fn commutator(a: &PureBraid, b: &PureBraid) -> Result<Self> {
        a.concat(b)?.concat(&a.inverse())?.concat(&b.inverse())
    }
}

/// The pure generator `A(i,j) = (s_{j-1} .. s_{i+1}) s_i^2 (s_{i+1}^-1 .. s_{j-1}^-1)`.
pub fn expand_pure_generator(i: usize, j: usize, strands: usize) -> Result<PureBraid> {
    if i == 0 || i >= j || j > strands {
        return Err(Error::InvalidPureGenerator { i, j, strands });
    }
    let mut letters: Vec<(usize, bool)> = ((i + 1)..j).rev().map(|k| (k, true)).collect();
    letters.push((i, true));
    letters.push((i, true));
    letters.extend(((i + 1)..j).map(|k| (k, false)));
    Ok(PureBraid(BraidWord { strands, letters }))
}

/// Removes the strand starting at position `k`, dropping every crossing it
/// takes part in and re-indexing the rest.
pub fn delete_strand_word(b: &BraidWord, k: usize) -> Result<BraidWord> {
    if k == 0 || k > b.strands {
        return Err(Error::StrandOutOfRange {
            strand: k,
            strands: b.strands,
        });
    }
    let mut at: Vec<usize> = (1..=b.strands).collect();
    let mut pos_k = k;
    let mut letters = Vec::new();
    for &(i, s) in &b.letters {
        if at[i - 1] != k && at[i] != k {
            letters.push((if i > pos_k { i - 1 } else { i }, s));
        } else if at[i - 1] == k {
            pos_k = i + 1;
        } else {
            pos_k = i;
        }
        at.swap(i - 1, i);
    }
    Ok(BraidWord {
        strands: b.strands - 1,
        letters,
    })
}

pub fn delete_strand(b: &PureBraid, k: usize) -> Result<PureBraid> {
    delete_strand_word(&b.0, k).map(PureBraid)
}

/// Result of the Brunnian check on a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BrunnianStatus {
    Unknown,
    Verified,
    Refuted,
}

/// A pure braid on `n + 1` strands presenting an `(n + 1)`-component string link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringLinkPresentation {
    braid: PureBraid,
    brunnian: BrunnianStatus,
}

impl StringLinkPresentation {
    /// Wraps a pure braid on at least two strands; the Brunnian status is unknown.
    pub fn new(braid: PureBraid) -> Result<Self> {
        if braid.strands() < 2 {
            return Err(Error::StrandOutOfRange {
                strand: braid.strands(),
                strands: 2,
            });
        }
        Ok(StringLinkPresentation {
            braid,
            brunnian: BrunnianStatus::Unknown,
        })
    }

    /// Wraps and runs the Brunnian check.
    pub fn checked(braid: PureBraid) -> Result<Self> {
        Ok(Self::new(braid)?.verify())
    }

    pub fn identity(n: usize) -> Self {
        StringLinkPresentation {
            braid: PureBraid::identity(n + 1),
            brunnian: BrunnianStatus::Verified,
        }
    }

    pub fn verify(mut self) -> Self {
        self.brunnian = if is_brunnian(&self) {
            BrunnianStatus::Verified
        } else {
            BrunnianStatus::Refuted
        };
        self
    }

    pub fn braid(&self) -> &PureBraid {
        &self.braid
    }

    /// `n`, one less than the number of strands.
    pub fn n(&self) -> usize {
        self.braid.strands() - 1
    }

    pub fn brunnian(&self) -> BrunnianStatus {
        self.brunnian
    }

    pub fn is_verified_brunnian(&self) -> bool {
        self.brunnian == BrunnianStatus::Verified
    }

    pub fn inverse(&self) -> Self {
        StringLinkPresentation {
            braid: self.braid.inverse(),
            // deletion commutes with inversion
            brunnian: self.brunnian,
        }
    }
}

/// True iff deleting any single strand leaves the trivial braid.
pub fn is_brunnian(s: &StringLinkPresentation) -> bool {
    (1..=s.braid.strands()).all(|k| {
        let d = delete_strand(&s.braid, k).expect("strand in range");
        is_trivial_braid(d.word())
    })
}

/// Oriented PD code of the braid closure, strands oriented downward.
///
/// Arcs are numbered top to bottom along the word; a positive letter gives a
/// positive crossing whose under-strand runs from position `i` to `i + 1`.
pub fn closure_pd(b: &BraidWord) -> PdCode {
    let m = b.strands;
    // arcs are created lazily so that crossing-free strands stay free loops
    let mut top: Vec<Option<usize>> = vec![None; m];
    let mut cur: Vec<Option<usize>> = vec![None; m];
    let mut next = 1usize;
    let mut fresh = || {
        let a = next;
        next += 1;
        a
    };
    let mut crossings = Vec::with_capacity(b.len());
    for &(i, s) in &b.letters {
        let (l, r) = (i - 1, i);
        for p in [l, r] {
            if cur[p].is_none() {
                let a = fresh();
                top[p] = Some(a);
                cur[p] = Some(a);
            }
        }
        let (nw, ne) = (cur[l].unwrap(), cur[r].unwrap());
        let (sw, se) = (fresh(), fresh());
        let arcs = if s { [nw, sw, se, ne] } else { [ne, nw, sw, se] };
        crossings.push(PdCrossing {
            sign: if s { 1 } else { -1 },
            arcs,
        });
        cur[l] = Some(sw);
        cur[r] = Some(se);
    }
    // close: the bottom arc at each position is the top arc there
    let perm = permutation_of(b);
    let components = count_cycles(&perm);
    let mut rename = std::collections::HashMap::new();
    for p in 0..m {
        if let (Some(t), Some(c)) = (top[p], cur[p]) {
            rename.insert(c, t);
        }
    }
    for x in &mut crossings {
        for a in &mut x.arcs {
            if let Some(&t) = rename.get(a) {
                *a = t;
            }
        }
    }
    PdCode::new(components, crossings).compact()
}

fn count_cycles(p: &Permutation) -> usize {
    let mut seen = vec![false; p.len()];
    let mut count = 0;
    for s in 1..=p.len() {
        if !seen[s - 1] {
            count += 1;
            let mut k = s;
            while !seen[k - 1] {
                seen[k - 1] = true;
                k = p.apply(k);
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(text: &str, m: usize) -> BraidWord {
        BraidWord::parse(text, m).unwrap()
    }

    #[test]
    fn permutations() {
        assert_eq!(permutation_of(&bw("s1", 3)).cycles(), "(1 2)");
        assert!(permutation_of(&BraidWord::identity(3)).is_identity());
        assert_eq!(permutation_of(&bw("s1 s2 s1", 3)).cycles(), "(1 3)");
        let u = bw("s1 s2", 4);
        let v = bw("s3 s1", 4);
        assert_eq!(
            permutation_of(&u.concat(&v).unwrap()),
            permutation_of(&u).then(&permutation_of(&v))
        );
    }

    #[test]
    fn pure_generators() {
        assert_eq!(expand_pure_generator(1, 2, 2).unwrap().word(), &bw("s1 s1", 2));
        assert_eq!(
            expand_pure_generator(1, 3, 3).unwrap().word(),
            &bw("s2 s1 s1 s2'", 3)
        );
        let a25 = expand_pure_generator(2, 5, 5).unwrap();
        assert!(permutation_of(a25.word()).is_identity());
        assert!(expand_pure_generator(2, 2, 3).is_err());
        assert!(expand_pure_generator(1, 4, 3).is_err());
        assert_eq!(bw("A(1,3)'", 3), bw("s2 s1' s1' s2'", 3));
    }

    #[test]
    fn parse_errors() {
        assert!(BraidWord::parse("s3", 3).is_err());
        assert!(BraidWord::parse("t1", 3).is_err());
        assert!(BraidWord::parse("A(1)", 3).is_err());
        assert_eq!(bw("A( 1 , 3 ) s1", 3).len(), 5);
    }

    #[test]
    fn deletion() {
        let a13 = expand_pure_generator(1, 3, 3).unwrap();
        let d = delete_strand(&a13, 3).unwrap();
        assert_eq!(d.strands(), 2);
        assert!(is_trivial_braid(d.word()));
        let e = delete_strand(&PureBraid::identity(3), 2).unwrap();
        assert_eq!(e, PureBraid::identity(2));
        let h = expand_pure_generator(1, 2, 2).unwrap();
        assert_eq!(delete_strand(&h, 1).unwrap(), PureBraid::identity(1));
        // deleting strand 2 of A(1,3) leaves A(1,2)
        let d2 = delete_strand(&a13, 2).unwrap();
        assert_eq!(d2.word(), &bw("s1 s1", 2));
        assert!(delete_strand(&a13, 4).is_err());
    }

    #[test]
    fn brunnian_examples() {
        let borromean = PureBraid::new(bw("A(1,3) A(2,3) A(1,3)' A(2,3)'", 3)).unwrap();
        assert!(is_brunnian(&StringLinkPresentation::new(borromean).unwrap()));
        let a12 = PureBraid::new(bw("A(1,2)", 3)).unwrap();
        assert!(!is_brunnian(&StringLinkPresentation::new(a12).unwrap()));
        assert!(is_brunnian(&StringLinkPresentation::identity(3)));
    }

    #[test]
    fn closure_examples() {
        let unlink = closure_pd(&BraidWord::identity(3));
        assert_eq!(unlink.components, 3);
        assert!(unlink.crossings.is_empty());

        let hopf = closure_pd(&bw("s1 s1", 2));
        assert_eq!(hopf.components, 2);
        assert_eq!(hopf.crossings.len(), 2);
        assert!(hopf.crossings.iter().all(|x| x.sign == 1));
        assert_eq!(hopf.count_components().unwrap(), 2);

        let borromean = closure_pd(&bw("A(1,3) A(2,3) A(1,3)' A(2,3)'", 3));
        assert_eq!(borromean.crossings.len(), 12);
        assert_eq!(borromean.count_components().unwrap(), 3);
    }

    #[test]
    fn closure_of_knot() {
        let trefoil = closure_pd(&bw("s1 s1 s1", 2));
        assert_eq!(trefoil.components, 1);
        assert_eq!(trefoil.count_components().unwrap(), 1);
        // a strand untouched by the word stays a free loop
        let split = closure_pd(&bw("s1 s1 s1", 3));
        assert_eq!(split.components, 2);
        assert_eq!(split.count_components().unwrap(), 2);
    }
}
