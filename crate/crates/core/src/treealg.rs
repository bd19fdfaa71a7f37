//! Labeled unitrivalent trees modulo AS and IHX, the comb basis, and the
//! half-square lattice.
//!
//! A tree of degree `n` has leaves labeled `1..=n+1`. Rooting it at leaf
//! `n + 1` turns it into a planar binary tree ([`Term`]) whose node
//! `Node(a, b)` reads the cyclic order at a vertex as `(parent, a, b)`. Under
//! this reading AS is antisymmetry of `Node` and IHX is the Jacobi identity,
//! so the group of trees is the multilinear part of a free Lie algebra and
//! the combs `[σ1, [σ2, .. [σ(n-1), n]]]` form a basis.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A planar binary tree with labeled leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Leaf(usize),
    Node(Box<Term>, Box<Term>),
}

impl Term {
    pub fn node(a: Term, b: Term) -> Term {
        Term::Node(Box::new(a), Box::new(b))
    }

    pub fn contains(&self, label: usize) -> bool {
        match self {
            Term::Leaf(l) => *l == label,
            Term::Node(a, b) => a.contains(label) || b.contains(label),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Term::Leaf(l) => out.push(*l),
            Term::Node(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// The right comb `[t_1, [t_2, .. [t_k, last]]]`.
    pub fn comb(teeth: &[usize], last: usize) -> Term {
        teeth
            .iter()
            .rev()
            .fold(Term::Leaf(last), |acc, &t| Term::node(Term::Leaf(t), acc))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Leaf(l) => write!(f, "{l}"),
            Term::Node(a, b) => write!(f, "({a} {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Vertex {
    Leaf { label: usize, nbr: usize },
    Internal { nbrs: [usize; 3] },
}

/// An unrooted labeled unitrivalent tree with a cyclic order at each
/// trivalent vertex.
#[derive(Debug, Clone)]
pub struct LabeledTree {
    n: usize,
    vertices: Vec<Vertex>,
}

impl LabeledTree {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn internal_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| matches!(self.vertices[v], Vertex::Internal { .. }))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        let degrees: usize = self
            .vertices
            .iter()
            .map(|v| match v {
                Vertex::Leaf { .. } => 1,
                Vertex::Internal { .. } => 3,
            })
            .sum();
        degrees / 2
    }

    fn leaf_vertex(&self, label: usize) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| matches!(v, Vertex::Leaf { label: l, .. } if *l == label))
    }

    /// Reverses the cyclic order at an internal vertex (one AS move).
    pub fn flip_vertex(&mut self, v: usize) -> Result<()> {
        match self.vertices.get_mut(v) {
            Some(Vertex::Internal { nbrs }) => {
                nbrs.swap(1, 2);
                Ok(())
            }
            _ => Err(Error::MalformedTree(format!("{v} is not an internal vertex"))),
        }
    }

    /// The planar binary tree hanging off the leaf labeled `label`.
    pub fn rooted_at(&self, label: usize) -> Result<Term> {
        let root = self
            .leaf_vertex(label)
            .ok_or_else(|| Error::MalformedTree(format!("no leaf {label}")))?;
        let Vertex::Leaf { nbr, .. } = self.vertices[root] else {
            unreachable!()
        };
        self.subtree(nbr, root, self.vertices.len())
    }

    fn subtree(&self, v: usize, from: usize, budget: usize) -> Result<Term> {
        if budget == 0 {
            return Err(Error::MalformedTree("cycle".into()));
        }
        match &self.vertices[v] {
            Vertex::Leaf { label, .. } => Ok(Term::Leaf(*label)),
            Vertex::Internal { nbrs } => {
                let k = nbrs
                    .iter()
                    .position(|&u| u == from)
                    .ok_or_else(|| Error::MalformedTree("asymmetric edge".into()))?;
                let a = self.subtree(nbrs[(k + 1) % 3], v, budget - 1)?;
                let b = self.subtree(nbrs[(k + 2) % 3], v, budget - 1)?;
                Ok(Term::node(a, b))
            }
        }
    }

    /// Builds the tree whose leaf `root_label` is attached to `term`.
    pub fn from_rooted(root_label: usize, term: &Term) -> Result<LabeledTree> {
        let mut vertices = vec![Vertex::Leaf {
            label: root_label,
            nbr: 1,
        }];
        fn build(t: &Term, parent: usize, vs: &mut Vec<Vertex>) -> usize {
            let me = vs.len();
            match t {
                Term::Leaf(l) => vs.push(Vertex::Leaf {
                    label: *l,
                    nbr: parent,
                }),
                Term::Node(a, b) => {
                    vs.push(Vertex::Internal { nbrs: [parent, 0, 0] });
                    let ia = build(a, me, vs);
                    let ib = build(b, me, vs);
                    vs[me] = Vertex::Internal {
                        nbrs: [parent, ia, ib],
                    };
                }
            }
            me
        }
        build(term, 0, &mut vertices);
        LabeledTree::validated(vertices)
    }

    fn validated(vertices: Vec<Vertex>) -> Result<LabeledTree> {
        let mut labels: Vec<usize> = vertices
            .iter()
            .filter_map(|v| match v {
                Vertex::Leaf { label, .. } => Some(*label),
                _ => None,
            })
            .collect();
        labels.sort_unstable();
        let leaves = labels.len();
        if leaves < 2 || labels != (1..=leaves).collect::<Vec<_>>() {
            return Err(Error::MalformedTree(format!(
                "leaf labels {labels:?} are not 1..={leaves}"
            )));
        }
        let tree = LabeledTree {
            n: leaves - 1,
            vertices,
        };
        if tree.edge_count() != 2 * tree.n - 1 {
            return Err(Error::MalformedTree("wrong edge count".into()));
        }
        // connectivity: the rooted view must reach every leaf
        let reached = tree.rooted_at(1)?.leaves().len();
        if reached + 1 != leaves {
            return Err(Error::MalformedTree("disconnected".into()));
        }
        Ok(tree)
    }
}

/// Equality as abstract labeled trees with vertex orientations.
impl PartialEq for LabeledTree {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rooted_at(self.n + 1).ok() == other.rooted_at(other.n + 1).ok()
    }
}

impl Eq for LabeledTree {}

impl fmt::Display for LabeledTree {
    /// Writes the tree rooted at its largest leaf as an edge `(n+1 T)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rooted_at(self.n + 1) {
            Ok(t) => write!(f, "({} {t})", self.n + 1),
            Err(_) => write!(f, "<malformed>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(usize),
    List(Vec<Sexp>),
}

fn parse_sexp(text: &str) -> Result<Sexp> {
    let mut tokens = Vec::new();
    let mut num = String::new();
    for c in text.chars() {
        if c.is_ascii_digit() {
            num.push(c);
            continue;
        }
        if !num.is_empty() {
            tokens.push(std::mem::take(&mut num));
        }
        match c {
            '(' | ')' => tokens.push(c.to_string()),
            c if c.is_whitespace() || c == ',' => {}
            c => return Err(Error::MalformedTree(format!("unexpected `{c}`"))),
        }
    }
    if !num.is_empty() {
        tokens.push(num);
    }
    let mut pos = 0;
    fn go(tokens: &[String], pos: &mut usize) -> Result<Sexp> {
        let tok = tokens
            .get(*pos)
            .ok_or_else(|| Error::MalformedTree("unexpected end".into()))?;
        *pos += 1;
        match tok.as_str() {
            "(" => {
                let mut items = Vec::new();
                loop {
                    match tokens.get(*pos).map(String::as_str) {
                        Some(")") => {
                            *pos += 1;
                            return Ok(Sexp::List(items));
                        }
                        Some(_) => items.push(go(tokens, pos)?),
                        None => return Err(Error::MalformedTree("unbalanced".into())),
                    }
                }
            }
            ")" => Err(Error::MalformedTree("unexpected `)`".into())),
            t => Ok(Sexp::Atom(t.parse().map_err(|_| {
                Error::MalformedTree(format!("bad label `{t}`"))
            })?)),
        }
    }
    let s = go(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::MalformedTree("trailing input".into()));
    }
    Ok(s)
}

/// Parses the nested-list tree grammar.
///
/// The outermost list is either an edge `(A B)` or a parentless vertex
/// `(A B C)`; every inner list `(A B)` is a vertex whose cyclic order is
/// `(parent, A, B)`.
pub fn parse_tree(text: &str) -> Result<LabeledTree> {
    let sexp = parse_sexp(text)?;
    let mut vertices: Vec<Vertex> = Vec::new();

    fn add(s: &Sexp, parent: usize, vs: &mut Vec<Vertex>) -> Result<usize> {
        let me = vs.len();
        match s {
            Sexp::Atom(l) => vs.push(Vertex::Leaf {
                label: *l,
                nbr: parent,
            }),
            Sexp::List(items) if items.len() == 2 => {
                vs.push(Vertex::Internal { nbrs: [parent, 0, 0] });
                let a = add(&items[0], me, vs)?;
                let b = add(&items[1], me, vs)?;
                vs[me] = Vertex::Internal {
                    nbrs: [parent, a, b],
                };
            }
            Sexp::List(items) => {
                return Err(Error::MalformedTree(format!(
                    "inner vertex with {} children",
                    items.len()
                )))
            }
        }
        Ok(me)
    }

    let Sexp::List(items) = &sexp else {
        return Err(Error::MalformedTree("expected a list".into()));
    };
    match items.len() {
        2 => {
            // two endpoints of an edge: reserve slots and link them
            let a = add(&items[0], usize::MAX, &mut vertices)?;
            let b = add(&items[1], a, &mut vertices)?;
            match &mut vertices[a] {
                Vertex::Leaf { nbr, .. } => *nbr = b,
                Vertex::Internal { nbrs } => nbrs[0] = b,
            }
        }
        3 => {
            vertices.push(Vertex::Internal { nbrs: [0, 0, 0] });
            let mut nbrs = [0; 3];
            for (k, item) in items.iter().enumerate() {
                nbrs[k] = add(item, 0, &mut vertices)?;
            }
            vertices[0] = Vertex::Internal { nbrs };
        }
        k => {
            return Err(Error::MalformedTree(format!(
                "outer list has {k} entries"
            )))
        }
    }
    LabeledTree::validated(vertices)
}

/// Coordinates in the comb basis `{t_σ : σ ∈ S_{n-1}}`, ordered
/// lexicographically by the one-line word of `σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeVector {
    n: usize,
    coords: Vec<i64>,
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Lexicographic rank of a permutation of `1..=k`.
fn perm_rank(images: &[usize]) -> usize {
    let k = images.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller = images[i + 1..].iter().filter(|&&v| v < images[i]).count();
        rank += smaller * factorial(k - 1 - i);
    }
    rank
}

impl TreeVector {
    pub fn zero(n: usize) -> Self {
        TreeVector {
            n,
            coords: vec![0; factorial(n.saturating_sub(1))],
        }
    }

    pub fn unit(sigma: &Permutation) -> Self {
        let mut v = Self::zero(sigma.len() + 1);
        v.coords[perm_rank(sigma.images())] = 1;
        v
    }

    pub fn from_coords(n: usize, coords: Vec<i64>) -> Result<Self> {
        if coords.len() != factorial(n.saturating_sub(1)) {
            return Err(Error::RankMismatch {
                left: factorial(n.saturating_sub(1)),
                right: coords.len(),
            });
        }
        Ok(TreeVector { n, coords })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [i64] {
        &mut self.coords
    }

    pub fn get(&self, sigma: &Permutation) -> i64 {
        self.coords[perm_rank(sigma.images())]
    }

    /// The index order: all of `S_{n-1}`, lexicographic.
    pub fn basis(&self) -> Vec<Permutation> {
        Permutation::all(self.n - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &TreeVector) -> TreeVector {
        assert_eq!(self.n, other.n, "degree mismatch");
        TreeVector {
            n: self.n,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> TreeVector {
        TreeVector {
            n: self.n,
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    fn add_comb(&mut self, teeth: &[usize], c: i64) {
        self.coords[perm_rank(teeth)] += c;
    }
}

/// The comb `t_σ`: leaf `n + 1`, then teeth `σ(1), .., σ(n-1)`, then leaf `n`.
pub fn comb_basis_tree(n: usize, sigma: &Permutation) -> Result<LabeledTree> {
    if n == 0 || sigma.len() + 1 != n {
        return Err(Error::InvalidPermutation(sigma.images().to_vec()));
    }
    LabeledTree::from_rooted(n + 1, &Term::comb(sigma.images(), n))
}

type CombMap = HashMap<Vec<usize>, i64>;

/// `ad(a)` applied to a combination of combs ending in `n`.
fn ad(a: &Term, combs: CombMap) -> CombMap {
    match a {
        Term::Leaf(l) => combs
            .into_iter()
            .map(|(mut teeth, c)| {
                teeth.insert(0, *l);
                (teeth, c)
            })
            .collect(),
        Term::Node(a1, a2) => {
            // ad[a1,a2] = ad a1 ad a2 - ad a2 ad a1
            let mut out = ad(a1, ad(a2, combs.clone()));
            for (teeth, c) in ad(a2, ad(a1, combs)) {
                *out.entry(teeth).or_insert(0) -= c;
            }
            out.retain(|_, c| *c != 0);
            out
        }
    }
}

/// Expands a rooted term containing leaf `n` into right combs ending at `n`.
fn combs_of(t: &Term, n: usize) -> CombMap {
    match t {
        Term::Leaf(l) => {
            assert_eq!(*l, n, "leaf n must be reached along the spine");
            CombMap::from([(Vec::new(), 1)])
        }
        Term::Node(a, b) if a.contains(n) => combs_of(&Term::Node(b.clone(), a.clone()), n)
            .into_iter()
            .map(|(k, c)| (k, -c))
            .collect(),
        Term::Node(a, b) => ad(a, combs_of(b, n)),
    }
}

/// Reduction strategy. All strategies reach the same normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Recursive Jacobi expansion through `ad`, sliding branches onto the
    /// spine from leaf `n` outward.
    Spine,
    /// Term rewriting, always rewriting the redex nearest the root.
    RewriteTopDown,
    /// Term rewriting, always rewriting the redex nearest leaf `n`.
    RewriteBottomUp,
}

/// Expansion of a tree in the comb basis.
pub fn reduce_to_basis(t: &LabeledTree) -> Result<TreeVector> {
    reduce_with(t, Strategy::Spine)
}

/// Expansion of a formal integer combination of trees of one degree.
pub fn reduce_combination(terms: &[(i64, LabeledTree)]) -> Result<TreeVector> {
    let n = terms
        .first()
        .map(|(_, t)| t.n)
        .ok_or_else(|| Error::MalformedTree("empty combination".into()))?;
    let mut out = TreeVector::zero(n);
    for (c, t) in terms {
        if t.n != n {
            return Err(Error::MalformedTree("mixed degrees".into()));
        }
        out = out.add(&reduce_to_basis(t)?.scale(*c));
    }
    Ok(out)
}

pub fn reduce_with(t: &LabeledTree, strategy: Strategy) -> Result<TreeVector> {
    let n = t.n;
    let rooted = t.rooted_at(n + 1)?;
    reduce_term(&rooted, n, strategy)
}

/// Reduces a rooted term with leaves `1..=n`.
pub fn reduce_term(rooted: &Term, n: usize, strategy: Strategy) -> Result<TreeVector> {
    let mut out = TreeVector::zero(n);
    match strategy {
        Strategy::Spine => {
            for (teeth, c) in combs_of(rooted, n) {
                out.add_comb(&teeth, c);
            }
        }
        Strategy::RewriteTopDown | Strategy::RewriteBottomUp => {
            for (term, c) in rewrite(rooted, n, strategy == Strategy::RewriteTopDown) {
                let (teeth, last) = comb_teeth(&term).expect("normal form is a comb");
                debug_assert_eq!(last, n);
                out.add_comb(&teeth, c);
            }
        }
    }
    Ok(out)
}

fn comb_teeth(t: &Term) -> Option<(Vec<usize>, usize)> {
    let mut teeth = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Leaf(l) => return Some((teeth, *l)),
            Term::Node(a, b) => match **a {
                Term::Leaf(l) => {
                    teeth.push(l);
                    cur = b;
                }
                Term::Node(..) => return None,
            },
        }
    }
}

/// One local move at a spine node.
enum Redex {
    /// leaf `n` lies in the left child: swap children, negate
    As,
    /// the off-spine child is compound: IHX
    Ihx,
}

/// Depth (along the spine) and kind of every redex of `t`.
fn redexes(t: &Term, n: usize) -> Vec<(usize, Redex)> {
    let mut out = Vec::new();
    let mut cur = t;
    let mut depth = 0;
    while let Term::Node(a, b) = cur {
        if a.contains(n) {
            out.push((depth, Redex::As));
            cur = a;
        } else {
            if matches!(**a, Term::Node(..)) {
                out.push((depth, Redex::Ihx));
            }
            cur = b;
        }
        depth += 1;
    }
    out
}

/// Rewrites the spine node at `depth`, returning the signed replacement terms.
fn rewrite_at(t: &Term, n: usize, depth: usize, redex: &Redex) -> Vec<(Term, i64)> {
    let Term::Node(a, b) = t else {
        unreachable!("redex depth beyond the spine")
    };
    if depth > 0 {
        let (spine, other, spine_left) = if a.contains(n) {
            (a, b, true)
        } else {
            (b, a, false)
        };
        return rewrite_at(spine, n, depth - 1, redex)
            .into_iter()
            .map(|(s, c)| {
                let node = if spine_left {
                    Term::node(s, (**other).clone())
                } else {
                    Term::node((**other).clone(), s)
                };
                (node, c)
            })
            .collect();
    }
    match redex {
        Redex::As => vec![(Term::node((**b).clone(), (**a).clone()), -1)],
        Redex::Ihx => {
            let Term::Node(a1, a2) = &**a else {
                unreachable!()
            };
            // [[a1,a2],b] = [a1,[a2,b]] - [a2,[a1,b]]
            vec![
                (
                    Term::node((**a1).clone(), Term::node((**a2).clone(), (**b).clone())),
                    1,
                ),
                (
                    Term::node((**a2).clone(), Term::node((**a1).clone(), (**b).clone())),
                    -1,
                ),
            ]
        }
    }
}

fn rewrite(t: &Term, n: usize, top_down: bool) -> HashMap<Term, i64> {
    let mut done: HashMap<Term, i64> = HashMap::new();
    let mut pending: Vec<(Term, i64)> = vec![(t.clone(), 1)];
    while let Some((term, c)) = pending.pop() {
        let rs = redexes(&term, n);
        let pick = if top_down { rs.first() } else { rs.last() };
        match pick {
            None => *done.entry(term).or_insert(0) += c,
            Some((depth, redex)) => {
                for (s, k) in rewrite_at(&term, n, *depth, redex) {
                    pending.push((s, c * k));
                }
            }
        }
    }
    done.retain(|_, c| *c != 0);
    done
}

/// Every planar binary tree with leaf set `labels` (ordered children).
pub fn all_rooted_terms(labels: &[usize]) -> Vec<Term> {
    if labels.len() == 1 {
        return vec![Term::Leaf(labels[0])];
    }
    let mut out = Vec::new();
    let k = labels.len();
    for mask in 1..(1u32 << k) - 1 {
        let (left, right): (Vec<usize>, Vec<usize>) = {
            let mut l = Vec::new();
            let mut r = Vec::new();
            for (i, &x) in labels.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    l.push(x)
                } else {
                    r.push(x)
                }
            }
            (l, r)
        };
        let ls = all_rooted_terms(&left);
        let rs = all_rooted_terms(&right);
        for a in &ls {
            for b in &rs {
                out.push(Term::node(a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Every labeled tree of degree `n` with every choice of vertex orientation.
pub fn all_labeled_trees(n: usize) -> Vec<LabeledTree> {
    let labels: Vec<usize> = (1..=n).collect();
    all_rooted_terms(&labels)
        .iter()
        .map(|t| LabeledTree::from_rooted(n + 1, t).expect("generated tree is valid"))
        .collect()
}

/// An element of the lattice spanned by `½ t_σ²` (diagonal) and
/// `t_σ t_σ'` (off-diagonal, `σ < σ'`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymSquareVector {
    n: usize,
    diag: Vec<i64>,
    /// Row-major strict upper triangle.
    off: Vec<i64>,
}

impl SymSquareVector {
    pub fn zero(n: usize) -> Self {
        let k = factorial(n.saturating_sub(1));
        SymSquareVector {
            n,
            diag: vec![0; k],
            off: vec![0; k * (k - 1) / 2],
        }
    }

    /// `½ (n-1)! ((n-1)! + 1)`.
    pub fn lattice_rank(n: usize) -> usize {
        let k = factorial(n.saturating_sub(1));
        k * (k + 1) / 2
    }

    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn off_index(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < b);
        let k = self.dim();
        a * (2 * k - a - 1) / 2 + (b - a - 1)
    }

    pub fn diag(&self, a: usize) -> i64 {
        self.diag[a]
    }

    /// Coefficient of `t_a t_b` for basis positions `a != b`.
    pub fn off(&self, a: usize, b: usize) -> i64 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.off[self.off_index(a, b)]
    }

    /// All coordinates, diagonal first.
    pub fn flat(&self) -> Vec<i64> {
        self.diag.iter().chain(&self.off).copied().collect()
    }
}

/// `q(x) = ½ x²` in the half-square lattice.
pub fn sym_square(x: &TreeVector) -> SymSquareVector {
    let mut s = SymSquareVector::zero(x.n);
    let k = x.coords.len();
    for a in 0..k {
        s.diag[a] = x.coords[a] * x.coords[a];
        for b in a + 1..k {
            let idx = s.off_index(a, b);
            s.off[idx] = x.coords[a] * x.coords[b];
        }
    }
    s
}

/// Rank over the rationals of an integer matrix (fraction-free elimination).
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if m[r][col] != 0 {
                let (a, b) = (m[rank][col], m[r][col]);
                let g = gcd(a, b);
                for c in col..cols {
                    m[r][c] = m[r][c] * (a / g) - m[rank][c] * (b / g);
                }
                let rg = m[r].iter().fold(0, |acc, &v| gcd(acc, v));
                if rg > 1 {
                    m[r].iter_mut().for_each(|v| *v /= rg);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parse_tripod() {
        let t = parse_tree("( 1 ( 2 3 ) )").unwrap();
        assert_eq!(t.degree(), 2);
        assert_eq!(t.internal_vertices().len(), 1);
        assert_eq!(t.edge_count(), 3);
        assert_eq!(t, comb_basis_tree(2, &p("1")).unwrap());
        assert_eq!(reduce_to_basis(&t).unwrap().coords(), &[1]);
        let v = parse_tree("(1 2 3)").unwrap();
        assert_eq!(v.internal_vertices().len(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_tree("(1 (1 3))").is_err());
        assert!(parse_tree("(1 (2 4))").is_err());
        assert!(parse_tree("(1 (2 3 4))").is_err());
        assert!(parse_tree("(1 (2 3)").is_err());
        assert!(parse_tree("1").is_err());
        assert!(parse_tree("(1 (2 x))").is_err());
    }

    #[test]
    fn comb_text_matches_constructor() {
        // rooted at 4: [1,[2,3]]
        let t = parse_tree("(4 (1 (2 3)))").unwrap();
        assert_eq!(t, comb_basis_tree(3, &p("12")).unwrap());
        assert_ne!(
            comb_basis_tree(3, &p("12")).unwrap(),
            comb_basis_tree(3, &p("21")).unwrap()
        );
        // the same tree written from another leaf
        let u = parse_tree("(1 ((2 3) 4))").unwrap();
        assert_eq!(u.rooted_at(4).unwrap(), t.rooted_at(4).unwrap());
    }

    #[test]
    fn basis_elements_reduce_to_units() {
        for n in 1..=5 {
            for sigma in Permutation::all(n - 1) {
                let t = comb_basis_tree(n, &sigma).unwrap();
                assert_eq!(reduce_to_basis(&t).unwrap(), TreeVector::unit(&sigma));
            }
        }
        let six: std::collections::HashSet<String> = Permutation::all(3)
            .iter()
            .map(|s| comb_basis_tree(4, s).unwrap().to_string())
            .collect();
        assert_eq!(six.len(), 6);
    }

    #[test]
    fn as_negates() {
        let sigma = p("21");
        let mut t = comb_basis_tree(3, &sigma).unwrap();
        let v = t.internal_vertices()[0];
        t.flip_vertex(v).unwrap();
        assert_eq!(reduce_to_basis(&t).unwrap(), TreeVector::unit(&sigma).scale(-1));
        t.flip_vertex(v).unwrap();
        assert_eq!(reduce_to_basis(&t).unwrap(), TreeVector::unit(&sigma));
        assert!(t.flip_vertex(0).is_err());
    }

    #[test]
    fn h_tree() {
        // leaves 1,3 on one side of the internal edge and 2,4 on the other
        let h = parse_tree("((1 3) (2 4))").unwrap();
        // rooted at 4 this is [[1,3],2] = -[2,[1,3]] = -t_21
        let v = reduce_to_basis(&h).unwrap();
        assert_eq!(v.coords(), &[0, -1]);
        let parsed = parse_tree("((1 2) (3 4))").unwrap();
        // [[1,2],3] = [1,[2,3]] - [2,[1,3]]
        assert_eq!(reduce_to_basis(&parsed).unwrap().coords(), &[1, -1]);
    }

    #[test]
    fn strategies_agree_small() {
        for n in 1..=4 {
            for t in all_labeled_trees(n) {
                let a = reduce_with(&t, Strategy::Spine).unwrap();
                let b = reduce_with(&t, Strategy::RewriteTopDown).unwrap();
                let c = reduce_with(&t, Strategy::RewriteBottomUp).unwrap();
                assert_eq!(a, b, "{t}");
                assert_eq!(a, c, "{t}");
            }
        }
    }

    #[test]
    fn tree_counts() {
        assert_eq!(all_labeled_trees(2).len(), 2);
        assert_eq!(all_labeled_trees(3).len(), 12);
        assert_eq!(all_labeled_trees(4).len(), 120);
    }

    #[test]
    fn combination() {
        let t = comb_basis_tree(3, &p("12")).unwrap();
        let u = comb_basis_tree(3, &p("21")).unwrap();
        let v = reduce_combination(&[(2, t.clone()), (-3, u)]).unwrap();
        assert_eq!(v.coords(), &[2, -3]);
        assert!(reduce_combination(&[]).is_err());
        let mut w = comb_basis_tree(4, &p("123")).unwrap();
        w.flip_vertex(w.internal_vertices()[0]).unwrap();
        assert!(reduce_combination(&[(1, t), (1, w)]).is_err());
    }

    #[test]
    fn sym_square_examples() {
        let s = p("12");
        let s2 = p("21");
        assert_eq!(sym_square(&TreeVector::zero(3)), SymSquareVector::zero(3));
        let q = sym_square(&TreeVector::unit(&s));
        assert_eq!(q.flat(), vec![1, 0, 0]);
        let x = TreeVector::unit(&s).scale(2).add(&TreeVector::unit(&s2));
        let q = sym_square(&x);
        assert_eq!((q.diag(0), q.diag(1), q.off(0, 1)), (4, 1, 2));
    }

    #[test]
    fn lattice_ranks() {
        assert_eq!(SymSquareVector::lattice_rank(2), 1);
        assert_eq!(SymSquareVector::lattice_rank(3), 3);
        assert_eq!(SymSquareVector::lattice_rank(4), 21);
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(&[vec![0, 2], vec![3, 4], vec![1, 1]]), 2);
    }
}
