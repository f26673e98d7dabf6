//! Rooted unordered tree shapes with white leaves and at most one red leaf.
//!
//! A [`Shape`] is immutable and stored in canonical form: the children of
//! every internal node are sorted by their canonical code, so two shapes are
//! isomorphic exactly when their codes are equal. Shapes are cheap to clone
//! (reference counted) and can be shared freely between threads.

mod code;
mod enumerate;
mod families;

pub use code::{parse_code, parse_newick, CanonicalCode};
pub(crate) use code::parse_newick_labeled;
pub use enumerate::{enumerate_shapes, wedderburn_etherington, Enumerator};
pub use families::{caterpillar, complete, jellyfish, JellyfishSpec};

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Leaf colour. A shape holds any number of white leaves and at most one red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    White,
    Red,
}

/// Default arity bound (binary trees).
pub const BINARY: usize = 2;

#[derive(Clone)]
pub struct Shape(Arc<Node>);

struct Node {
    kind: Kind,
    arity: usize,
    white: usize,
    red: bool,
    height: usize,
    max_degree: usize,
    nodes: usize,
    code: Box<str>,
}

enum Kind {
    Leaf(Color),
    Internal(Box<[Shape]>),
}

impl Shape {
    /// Single-vertex binary shape.
    pub fn leaf(color: Color) -> Shape {
        Shape::leaf_node(color, BINARY)
    }

    pub fn white() -> Shape {
        Shape::leaf(Color::White)
    }

    pub fn red() -> Shape {
        Shape::leaf(Color::Red)
    }

    pub fn leaf_with_arity(color: Color, arity: usize) -> Result<Shape> {
        check_arity(arity)?;
        Ok(Shape::leaf_node(color, arity))
    }

    fn leaf_node(color: Color, arity: usize) -> Shape {
        let code = match color {
            Color::White => "o",
            Color::Red => "r",
        };
        Shape(Arc::new(Node {
            kind: Kind::Leaf(color),
            arity,
            white: usize::from(color == Color::White),
            red: color == Color::Red,
            height: 0,
            max_degree: 0,
            nodes: 1,
            code: code.into(),
        }))
    }

    /// Joins the roots of `parts` under a new root. All parts must carry the
    /// same arity bound `d`, and `2 <= parts.len() <= d`.
    pub fn join<I>(parts: I) -> Result<Shape>
    where
        I: IntoIterator<Item = Shape>,
    {
        let parts: Vec<Shape> = parts.into_iter().collect();
        let arity = match parts.first() {
            Some(p) => p.arity(),
            None => return Err(Error::Arity { children: 0, arity: BINARY }),
        };
        for p in &parts[1..] {
            if p.arity() != arity {
                return Err(Error::ArityMismatch(arity, p.arity()));
            }
        }
        Shape::internal(parts, arity)
    }

    /// Like [`Shape::join`], but first re-tags every part with arity `d`.
    pub fn join_with_arity<I>(parts: I, arity: usize) -> Result<Shape>
    where
        I: IntoIterator<Item = Shape>,
    {
        check_arity(arity)?;
        let parts = parts
            .into_iter()
            .map(|p| p.with_arity(arity))
            .collect::<Result<Vec<_>>>()?;
        Shape::internal(parts, arity)
    }

    pub(crate) fn internal(mut children: Vec<Shape>, arity: usize) -> Result<Shape> {
        if children.len() < 2 || children.len() > arity {
            return Err(Error::Arity { children: children.len(), arity });
        }
        if children.iter().filter(|c| c.has_red()).count() > 1 {
            return Err(Error::MultipleRedLeaves);
        }
        children.sort_by(|a, b| a.code().cmp(b.code()));
        Ok(Shape::from_sorted(children, arity))
    }

    /// Builds an internal node from children that are already canonical,
    /// sorted and valid for `arity`.
    pub(crate) fn from_sorted(children: Vec<Shape>, arity: usize) -> Shape {
        debug_assert!(children.windows(2).all(|w| w[0].code() <= w[1].code()));
        let mut code = String::with_capacity(2 + children.iter().map(|c| c.code().len()).sum::<usize>());
        code.push('(');
        let mut white = 0;
        let mut red = false;
        let mut height = 0;
        let mut max_degree = children.len();
        let mut nodes = 1;
        for c in &children {
            code.push_str(c.code());
            white += c.white_leaves();
            red |= c.has_red();
            height = height.max(c.height() + 1);
            max_degree = max_degree.max(c.0.max_degree);
            nodes += c.node_count();
        }
        code.push(')');
        Shape(Arc::new(Node {
            kind: Kind::Internal(children.into_boxed_slice()),
            arity,
            white,
            red,
            height,
            max_degree,
            nodes,
            code: code.into_boxed_str(),
        }))
    }

    /// Replaces the red leaf of `self` by `scion` (the `R[Q]` operation).
    /// The result is redleaf exactly when `scion` is.
    pub fn graft(&self, scion: &Shape) -> Result<Shape> {
        if !self.has_red() {
            return Err(Error::NoRedLeaf);
        }
        if self.arity() != scion.arity() {
            return Err(Error::ArityMismatch(self.arity(), scion.arity()));
        }
        Ok(self.graft_inner(scion))
    }

    fn graft_inner(&self, scion: &Shape) -> Shape {
        match &self.0.kind {
            Kind::Leaf(_) => scion.clone(),
            Kind::Internal(children) => {
                let mut next: Vec<Shape> = children.to_vec();
                let i = next.iter().position(|c| c.has_red()).expect("red leaf below");
                next[i] = next[i].graft_inner(scion);
                next.sort_by(|a, b| a.code().cmp(b.code()));
                Shape::from_sorted(next, self.arity())
            }
        }
    }

    /// Re-tags the shape with another arity bound.
    pub fn with_arity(&self, arity: usize) -> Result<Shape> {
        check_arity(arity)?;
        if arity == self.arity() {
            return Ok(self.clone());
        }
        if self.0.max_degree > arity {
            return Err(Error::Arity { children: self.0.max_degree, arity });
        }
        Ok(self.retag(arity))
    }

    fn retag(&self, arity: usize) -> Shape {
        match &self.0.kind {
            Kind::Leaf(c) => Shape::leaf_node(*c, arity),
            Kind::Internal(children) => {
                Shape::from_sorted(children.iter().map(|c| c.retag(arity)).collect(), arity)
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn white_leaves(&self) -> usize {
        self.0.white
    }

    /// White leaves plus the red leaf, if any.
    pub fn leaf_count(&self) -> usize {
        self.0.white + usize::from(self.0.red)
    }

    pub fn node_count(&self) -> usize {
        self.0.nodes
    }

    pub fn has_red(&self) -> bool {
        self.0.red
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    /// Largest number of children of any internal node.
    pub fn max_degree(&self) -> usize {
        self.0.max_degree
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.0.kind, Kind::Leaf(_))
    }

    pub fn color(&self) -> Option<Color> {
        match self.0.kind {
            Kind::Leaf(c) => Some(c),
            Kind::Internal(_) => None,
        }
    }

    /// Children in canonical order; empty for a leaf.
    pub fn children(&self) -> &[Shape] {
        match &self.0.kind {
            Kind::Leaf(_) => &[],
            Kind::Internal(c) => c,
        }
    }

    pub fn code(&self) -> &str {
        &self.0.code
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        CanonicalCode::from_shape(self)
    }

    /// Leaf colours in canonical (depth-first, canonical child order) order.
    /// Leaf positions used throughout the crate index into this sequence.
    pub fn leaf_colors(&self) -> Vec<Color> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Color>) {
        match &self.0.kind {
            Kind::Leaf(c) => out.push(*c),
            Kind::Internal(children) => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// The subtree reached by following child indices from the root.
    pub fn subtree(&self, path: &[usize]) -> Option<&Shape> {
        let mut cur = self;
        for &i in path {
            cur = cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Replaces the subtree at `path` and re-canonicalizes the ancestors.
    pub fn replace_at(&self, path: &[usize], with: Shape) -> Result<Shape> {
        if with.arity() != self.arity() {
            return Err(Error::ArityMismatch(self.arity(), with.arity()));
        }
        let Some((&first, rest)) = path.split_first() else {
            return Ok(with);
        };
        let children = self.children();
        if first >= children.len() {
            return Err(Error::InvalidParameter(format!("no child {first} on path")));
        }
        let mut next = children.to_vec();
        next[first] = next[first].replace_at(rest, with)?;
        Shape::internal(next, self.arity())
    }

    /// Child-index path from the root to the red leaf.
    pub fn red_path(&self) -> Option<Vec<usize>> {
        if !self.has_red() {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = self;
        while let Kind::Internal(children) = &cur.0.kind {
            let i = children.iter().position(|c| c.has_red())?;
            path.push(i);
            cur = &children[i];
        }
        Some(path)
    }

    /// The shape induced by a set of leaf positions (minimal spanning subtree
    /// with degree-2 vertices suppressed). Returns the induced shape together
    /// with the original position of each of its leaves, in the induced
    /// shape's canonical leaf order. `None` when `leaves` is empty.
    pub fn induced_subtree(&self, leaves: &[usize]) -> Result<Option<(Shape, Vec<usize>)>> {
        let total = self.leaf_count();
        let mut keep = vec![false; total];
        for &l in leaves {
            if l >= total {
                return Err(Error::InvalidParameter(format!("leaf position {l} out of range")));
            }
            keep[l] = true;
        }
        let mut next = 0;
        Ok(self.induce(&keep, &mut next))
    }

    fn induce(&self, keep: &[bool], next: &mut usize) -> Option<(Shape, Vec<usize>)> {
        match &self.0.kind {
            Kind::Leaf(_) => {
                let pos = *next;
                *next += 1;
                keep[pos].then(|| (self.clone(), vec![pos]))
            }
            Kind::Internal(children) => {
                let mut parts: Vec<(Shape, Vec<usize>)> =
                    children.iter().filter_map(|c| c.induce(keep, next)).collect();
                match parts.len() {
                    0 => None,
                    1 => parts.pop(),
                    _ => Some(join_labeled(parts, self.arity())),
                }
            }
        }
    }
}

/// Joins labeled parts, keeping each part's labels attached to its leaves.
pub(crate) fn join_labeled<L>(mut parts: Vec<(Shape, Vec<L>)>, arity: usize) -> (Shape, Vec<L>) {
    parts.sort_by(|a, b| a.0.code().cmp(b.0.code()));
    let mut labels = Vec::new();
    let mut children = Vec::with_capacity(parts.len());
    for (s, l) in parts {
        children.push(s);
        labels.extend(l);
    }
    (Shape::from_sorted(children, arity), labels)
}

/// A plane tree with labeled leaves, used to build shapes while tracking
/// where each original leaf ends up after canonicalization.
#[derive(Debug, Clone)]
pub(crate) enum Plane<L> {
    Leaf(Color, L),
    Node(Vec<Plane<L>>),
}

impl<L> Plane<L> {
    /// Canonicalizes into a shape plus the leaf labels in canonical order.
    pub(crate) fn canonicalize(self, arity: usize) -> Result<(Shape, Vec<L>)> {
        check_arity(arity)?;
        let (shape, labels, reds) = self.canon(arity)?;
        if reds > 1 {
            return Err(Error::MultipleRedLeaves);
        }
        Ok((shape, labels))
    }

    fn canon(self, arity: usize) -> Result<(Shape, Vec<L>, usize)> {
        match self {
            Plane::Leaf(c, l) => Ok((Shape::leaf_node(c, arity), vec![l], usize::from(c == Color::Red))),
            Plane::Node(children) => {
                if children.len() < 2 || children.len() > arity {
                    return Err(Error::Arity { children: children.len(), arity });
                }
                let mut reds = 0;
                let mut parts = Vec::with_capacity(children.len());
                for c in children {
                    let (s, l, r) = c.canon(arity)?;
                    reds += r;
                    parts.push((s, l));
                }
                if reds > 1 {
                    return Err(Error::MultipleRedLeaves);
                }
                let (s, l) = join_labeled(parts, arity);
                Ok((s, l, reds))
            }
        }
    }
}

pub(crate) fn check_arity(arity: usize) -> Result<()> {
    if arity < 2 {
        Err(Error::InvalidArity(arity))
    } else {
        Ok(())
    }
}

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.arity() == other.arity() && self.code() == other.code())
    }
}

impl Eq for Shape {}

impl Hash for Shape {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.code().hash(state);
        self.arity().hash(state);
    }
}

impl PartialOrd for Shape {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical-code order, then arity.
impl Ord for Shape {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code().cmp(other.code()).then(self.arity().cmp(&other.arity()))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity() == BINARY {
            write!(f, "Shape({})", self.code())
        } else {
            write!(f, "Shape({}, d={})", self.code(), self.arity())
        }
    }
}
