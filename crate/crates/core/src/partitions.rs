//! Partitions, r-tuples of partitions, boxes, corners and standard Young
//! tableaux of skew shape.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalars::{LaurentPoly, Monomial, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("BadNotation: {0}")]
    BadNotation(String),
    #[error("RankMismatch: expected {expected} components, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

/// Weakly decreasing row lengths, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn new(mut rows: Vec<u32>) -> Self {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        assert!(
            rows.windows(2).all(|w| w[0] >= w[1]),
            "rows must weakly decrease: {rows:?}"
        );
        Partition(rows)
    }

    pub fn rows(&self) -> &[u32] {
        &self.0
    }

    /// Row `j`, zero beyond the last row.
    pub fn row(&self, j: usize) -> u32 {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.0.len() <= self.0.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for first in (1..=n.min(max)).rev() {
                cur.push(first);
                go(n - first, first, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

/// An r-tuple of partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiPartition(Vec<Partition>);

/// A box with lower-left corner `(x, y)` in component `comp` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Box {
    pub comp: usize,
    pub x: u32,
    pub y: u32,
}

impl Box {
    pub fn new(comp: usize, x: u32, y: u32) -> Self {
        Box { comp, x, y }
    }

    /// `q1^x q2^y t_comp^-1`.
    pub fn weight(&self) -> Monomial {
        lattice_weight(self.comp, self.x as i32, self.y as i32)
    }

    pub fn weight_poly(&self) -> LaurentPoly {
        LaurentPoly::mono(self.weight())
    }
}

impl fmt::Display for Box {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{},{}]", self.comp, self.x, self.y)
    }
}

/// Weight of a lattice point, with the same convention as boxes.
pub fn lattice_weight(comp: usize, x: i32, y: i32) -> Monomial {
    Monomial::from_pairs(&[(Symbol::Q1, x), (Symbol::Q2, y), (Symbol::t(comp), -1)])
}

pub fn box_weight(b: &Box) -> LaurentPoly {
    b.weight_poly()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CornerKind {
    Inner,
    Outer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CornerPoint {
    pub comp: usize,
    pub x: u32,
    pub y: u32,
    pub kind: CornerKind,
}

impl CornerPoint {
    pub fn weight(&self) -> Monomial {
        lattice_weight(self.comp, self.x as i32, self.y as i32)
    }
}

impl MultiPartition {
    pub fn new(parts: Vec<Partition>) -> Self {
        assert!(!parts.is_empty(), "rank must be at least 1");
        MultiPartition(parts)
    }

    pub fn empty(r: usize) -> Self {
        MultiPartition(vec![Partition::empty(); r])
    }

    pub fn from_rows(rows: &[&[u32]]) -> Self {
        MultiPartition::new(rows.iter().map(|r| Partition::new(r.to_vec())).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn parts(&self) -> &[Partition] {
        &self.0
    }

    /// Component `k`, 1-based.
    pub fn comp(&self, k: usize) -> &Partition {
        &self.0[k - 1]
    }

    pub fn size(&self) -> u32 {
        self.0.iter().map(|p| p.size()).sum()
    }

    /// `self <= other` as Young diagrams, componentwise.
    pub fn le(&self, other: &MultiPartition) -> bool {
        self.rank() == other.rank() && self.0.iter().zip(&other.0).all(|(a, b)| b.contains(a))
    }

    pub fn has_box(&self, b: &Box) -> bool {
        b.x < self.comp(b.comp).row(b.y as usize)
    }

    /// Boxes in component, row, column order.
    pub fn boxes(&self) -> Vec<Box> {
        let mut out = Vec::with_capacity(self.size() as usize);
        for (k, p) in self.0.iter().enumerate() {
            for (j, &len) in p.0.iter().enumerate() {
                for i in 0..len {
                    out.push(Box::new(k + 1, i, j as u32));
                }
            }
        }
        out
    }

    /// Boxes of `self` not in `smaller`.
    pub fn skew_boxes(&self, smaller: &MultiPartition) -> Vec<Box> {
        self.boxes().into_iter().filter(|b| !smaller.has_box(b)).collect()
    }

    /// Inner corners (addable positions) and outer corners (upper-right
    /// corners of removable boxes), component by component, bottom row first.
    pub fn corners(&self) -> Vec<CornerPoint> {
        let mut out = Vec::new();
        for (k, p) in self.0.iter().enumerate() {
            let n = p.len();
            for j in 0..=n {
                let x = p.row(j);
                if j == 0 || x < p.row(j - 1) {
                    out.push(CornerPoint {
                        comp: k + 1,
                        x,
                        y: j as u32,
                        kind: CornerKind::Inner,
                    });
                }
            }
            for j in 0..n {
                if p.row(j) > p.row(j + 1) {
                    out.push(CornerPoint {
                        comp: k + 1,
                        x: p.row(j),
                        y: j as u32 + 1,
                        kind: CornerKind::Outer,
                    });
                }
            }
        }
        out
    }

    pub fn inner_corners(&self) -> Vec<CornerPoint> {
        self.corners().into_iter().filter(|c| c.kind == CornerKind::Inner).collect()
    }

    pub fn outer_corners(&self) -> Vec<CornerPoint> {
        self.corners().into_iter().filter(|c| c.kind == CornerKind::Outer).collect()
    }

    pub fn addable_boxes(&self) -> Vec<Box> {
        self.inner_corners().iter().map(|c| Box::new(c.comp, c.x, c.y)).collect()
    }

    pub fn removable_boxes(&self) -> Vec<Box> {
        self.outer_corners().iter().map(|c| Box::new(c.comp, c.x - 1, c.y - 1)).collect()
    }

    /// Add `b`, which must sit at an inner corner.
    pub fn add_box(&self, b: &Box) -> Option<MultiPartition> {
        let p = self.comp(b.comp);
        let j = b.y as usize;
        if p.row(j) != b.x || (j > 0 && p.row(j - 1) <= b.x) {
            return None;
        }
        let mut rows = p.0.clone();
        if j == rows.len() {
            rows.push(0);
        }
        rows[j] += 1;
        let mut out = self.clone();
        out.0[b.comp - 1] = Partition(rows);
        Some(out)
    }

    /// Remove `b`, which must be removable.
    pub fn remove_box(&self, b: &Box) -> Option<MultiPartition> {
        let p = self.comp(b.comp);
        let j = b.y as usize;
        if p.row(j) != b.x + 1 || p.row(j + 1) > b.x {
            return None;
        }
        let mut rows = p.0.clone();
        rows[j] -= 1;
        let mut out = self.clone();
        out.0[b.comp - 1] = Partition::new(rows);
        Some(out)
    }

    /// Parse `(4,3,1)|(2)`; `()` is the empty partition.
    pub fn parse(s: &str) -> Result<MultiPartition, PartitionError> {
        let bad = |m: &str| PartitionError::BadNotation(format!("{m} in `{s}`"));
        let mut parts = Vec::new();
        for chunk in s.split('|') {
            let c = chunk.trim();
            let inner = c
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| bad("components must be parenthesized"))?;
            let mut rows = Vec::new();
            for tok in inner.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let v: u32 = tok.parse().map_err(|_| bad("row lengths must be integers"))?;
                rows.push(v);
            }
            while rows.last() == Some(&0) {
                rows.pop();
            }
            if rows.contains(&0) || !rows.windows(2).all(|w| w[0] >= w[1]) {
                return Err(bad("rows must weakly decrease"));
            }
            parts.push(Partition(rows));
        }
        Ok(MultiPartition(parts))
    }

    pub fn parse_rank(s: &str, r: usize) -> Result<MultiPartition, PartitionError> {
        let m = Self::parse(s)?;
        if m.rank() != r {
            return Err(PartitionError::RankMismatch {
                expected: r,
                got: m.rank(),
            });
        }
        Ok(m)
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// All r-tuples of partitions of total size `d`: larger first components
/// first, then partitions in decreasing lexicographic order.
pub fn enumerate_multipartitions(r: usize, d: u32) -> Vec<MultiPartition> {
    assert!(r >= 1, "rank must be at least 1");
    if r == 1 {
        return Partition::all(d).into_iter().map(|p| MultiPartition(vec![p])).collect();
    }
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for p in Partition::all(a) {
            for rest in enumerate_multipartitions(r - 1, d - a) {
                let mut parts = vec![p.clone()];
                parts.extend(rest.0);
                out.push(MultiPartition(parts));
            }
        }
    }
    out
}

/// A standard Young tableau of shape `upper - lower`, stored as the chain of
/// removed boxes: `boxes[i-1]` carries label `i` and is `rho_{i-1} - rho_i`,
/// with `rho_0 = upper` and `rho_k = lower`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tableau {
    pub lower: MultiPartition,
    pub upper: MultiPartition,
    pub boxes: Vec<Box>,
}

impl Tableau {
    pub fn k(&self) -> usize {
        self.boxes.len()
    }

    /// Label of each box.
    pub fn filling(&self) -> Vec<(Box, usize)> {
        let mut v: Vec<_> = self.boxes.iter().enumerate().map(|(i, b)| (*b, i + 1)).collect();
        v.sort();
        v
    }

    /// The intermediate shapes `rho_0 = upper, ..., rho_k = lower`.
    pub fn chain(&self) -> Vec<MultiPartition> {
        let mut out = vec![self.upper.clone()];
        let mut cur = self.upper.clone();
        for b in &self.boxes {
            cur = cur.remove_box(b).expect("tableau chain is valid");
            out.push(cur.clone());
        }
        out
    }
}

/// All SYTx of shape `mu - lambda`; empty when `lambda` is not contained in
/// `mu`, a single empty tableau when they are equal.
pub fn enumerate_syt(lambda: &MultiPartition, mu: &MultiPartition) -> Vec<Tableau> {
    if !lambda.le(mu) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut path = Vec::new();
    fn go(
        cur: &MultiPartition,
        lambda: &MultiPartition,
        path: &mut Vec<Box>,
        out: &mut Vec<Vec<Box>>,
    ) {
        if cur == lambda {
            out.push(path.clone());
            return;
        }
        for b in cur.removable_boxes() {
            if lambda.has_box(&b) {
                continue;
            }
            let next = cur.remove_box(&b).unwrap();
            path.push(b);
            go(&next, lambda, path, out);
            path.pop();
        }
    }
    go(mu, lambda, &mut path, &mut out);
    out.into_iter()
        .map(|boxes| Tableau {
            lower: lambda.clone(),
            upper: mu.clone(),
            boxes,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(s: &str) -> MultiPartition {
        MultiPartition::parse(s).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_multipartitions(1, 0), vec![mp("()")]);
        let three: Vec<String> = enumerate_multipartitions(1, 3).iter().map(|m| m.to_string()).collect();
        assert_eq!(three, vec!["(3)", "(2,1)", "(1,1,1)"]);
        assert_eq!(enumerate_multipartitions(2, 1), vec![mp("(1)|()"), mp("()|(1)")]);
    }

    #[test]
    fn figure_one_corners() {
        let l = mp("(4,3,1)");
        let inner: Vec<_> = l.inner_corners().iter().map(|c| (c.x, c.y)).collect();
        let outer: Vec<_> = l.outer_corners().iter().map(|c| (c.x, c.y)).collect();
        assert_eq!(inner, vec![(4, 0), (3, 1), (1, 2), (0, 3)]);
        assert_eq!(outer, vec![(4, 1), (3, 2), (1, 3)]);
    }

    #[test]
    fn small_corners() {
        let e = mp("()");
        assert_eq!(e.inner_corners().len(), 1);
        assert!(e.outer_corners().is_empty());
        let one = mp("(1)");
        let inner: Vec<_> = one.inner_corners().iter().map(|c| (c.x, c.y)).collect();
        assert_eq!(inner, vec![(1, 0), (0, 1)]);
        let outer: Vec<_> = one.outer_corners().iter().map(|c| (c.x, c.y)).collect();
        assert_eq!(outer, vec![(1, 1)]);
    }

    #[test]
    fn box_weights() {
        assert_eq!(Box::new(1, 0, 0).weight(), Monomial::var(Symbol::t(1)).inv());
        let w = Box::new(2, 1, 2).weight();
        assert_eq!(w.exp(Symbol::Q1), 1);
        assert_eq!(w.exp(Symbol::Q2), 2);
        assert_eq!(w.exp(Symbol::t(2)), -1);
    }

    #[test]
    fn notation_round_trip() {
        for s in ["(4,3,1)|(2)", "()", "()|(1,1)|()"] {
            assert_eq!(mp(s).to_string(), s);
        }
        assert!(MultiPartition::parse("(1,2)").is_err());
        assert!(MultiPartition::parse("1,2").is_err());
    }

    #[test]
    fn syt_examples() {
        assert_eq!(enumerate_syt(&mp("()"), &mp("(2,1)")).len(), 2);
        assert_eq!(enumerate_syt(&mp("(2,1)"), &mp("(2,1)")).len(), 1);
        assert_eq!(enumerate_syt(&mp("(1)"), &mp("(2,1)")).len(), 2);
        assert!(enumerate_syt(&mp("(2)"), &mp("(1,1)")).is_empty());
    }

    #[test]
    fn add_remove_inverse() {
        let l = mp("(3,1)|(2)");
        for b in l.addable_boxes() {
            let m = l.add_box(&b).unwrap();
            assert_eq!(m.size(), l.size() + 1);
            assert_eq!(m.remove_box(&b).unwrap(), l);
        }
    }
}
