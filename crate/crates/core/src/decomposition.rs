//! White-leaf centroids and the splits `F = F1[F2 (+) F3]` behind the
//! recursive universal constructions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shape::{Color, Shape};

/// `tau_W` for every vertex, listed in preorder (canonical child order).
/// Vertices are identified by their child-index path from the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentroidReport {
    pub paths: Vec<Vec<usize>>,
    pub tau: Vec<usize>,
    /// Preorder indices of all vertices attaining the minimum.
    pub centroids: Vec<usize>,
    /// The first centroid in preorder, i.e. the lexicographically smallest path.
    pub designated: usize,
}

impl CentroidReport {
    pub fn designated_path(&self) -> &[usize] {
        &self.paths[self.designated]
    }

    pub fn min_tau(&self) -> usize {
        self.tau[self.designated]
    }
}

struct Vertex<'a> {
    path: Vec<usize>,
    shape: &'a Shape,
}

fn preorder<'a>(s: &'a Shape, path: &mut Vec<usize>, out: &mut Vec<Vertex<'a>>) {
    out.push(Vertex { path: path.clone(), shape: s });
    for (i, c) in s.children().iter().enumerate() {
        path.push(i);
        preorder(c, path, out);
        path.pop();
    }
}

/// Computes `tau_W(v)`: the largest white-leaf count over the components of
/// `S - v`, plus one when `v` is itself a white leaf.
pub fn white_leaf_centroid(s: &Shape) -> Result<CentroidReport> {
    let n = s.white_leaves();
    if s.is_leaf() || n < 2 {
        return Err(Error::InvalidParameter("centroid needs an internal vertex and two white leaves".into()));
    }
    let mut verts = Vec::with_capacity(s.node_count());
    preorder(s, &mut Vec::new(), &mut verts);
    let tau: Vec<usize> = verts
        .iter()
        .map(|v| {
            let below = v.shape.children().iter().map(Shape::white_leaves).max().unwrap_or(0);
            let above = n - v.shape.white_leaves();
            below.max(above) + usize::from(v.shape.color() == Some(Color::White))
        })
        .collect();
    let min = *tau.iter().min().expect("nonempty");
    let centroids: Vec<usize> = (0..tau.len()).filter(|&i| tau[i] == min).collect();
    Ok(CentroidReport {
        paths: verts.into_iter().map(|v| v.path).collect(),
        designated: centroids[0],
        centroids,
        tau,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitKind {
    Universal,
    RedleafDescendant,
    RedleafAncestor,
}

/// `F = stump[join(parts)]`. The stump carries a red leaf where the split
/// vertex was. For redleaf splits `parts[0]` holds the red leaf, and in the
/// ancestor case `parts[1]` is the part containing the centroid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub stump: Shape,
    pub parts: Vec<Shape>,
    pub kind: SplitKind,
    /// Path of the vertex the split was made at.
    pub vertex: Vec<usize>,
}

impl Split {
    pub fn f1(&self) -> &Shape {
        &self.stump
    }

    pub fn f2(&self) -> &Shape {
        &self.parts[0]
    }

    pub fn f3(&self) -> &Shape {
        &self.parts[1]
    }

    pub fn reassemble(&self) -> Result<Shape> {
        self.stump.graft(&Shape::join(self.parts.iter().cloned())?)
    }
}

fn split_at(f: &Shape, vertex: Vec<usize>, kind: SplitKind, lead: Option<usize>) -> Result<Split> {
    let v = f.subtree(&vertex).expect("vertex on path");
    let stump = f.replace_at(&vertex, Shape::leaf_with_arity(Color::Red, f.arity())?)?;
    let mut parts = v.children().to_vec();
    if let Some(i) = lead {
        let p = parts.remove(i);
        parts.insert(0, p);
    }
    Ok(Split { stump, parts, kind, vertex })
}

fn check_input(f: &Shape, redleaf: bool) -> Result<()> {
    if f.white_leaves() < 2 {
        return Err(Error::InvalidParameter("split needs at least two white leaves".into()));
    }
    if f.has_red() != redleaf {
        return Err(if redleaf { Error::NoRedLeaf } else { Error::MultipleRedLeaves });
    }
    Ok(())
}

/// Splits a white shape at its designated centroid `v`: the stump has its
/// red leaf at `v`, the parts are the subtrees at `v`'s children in
/// canonical order.
pub fn split_for_universal(f: &Shape) -> Result<Split> {
    check_input(f, false)?;
    let c = white_leaf_centroid(f)?;
    split_at(f, c.designated_path().to_vec(), SplitKind::Universal, None)
}

/// Splits a redleaf shape. When the red leaf lies below the centroid `v`
/// the split is at `v` and `parts[0]` contains the red leaf. Otherwise the
/// split is at `z`, the last common ancestor of the red leaf and `v`;
/// `parts[0]` contains the red leaf and `parts[1]` contains `v`.
pub fn split_for_redleaf(f: &Shape) -> Result<Split> {
    check_input(f, true)?;
    let c = white_leaf_centroid(f)?;
    let v = c.designated_path();
    let red = f.red_path().expect("red leaf");
    if red.starts_with(v) {
        let lead = red[v.len()];
        return split_at(f, v.to_vec(), SplitKind::RedleafDescendant, Some(lead));
    }
    let common = red.iter().zip(v).take_while(|(a, b)| a == b).count();
    let z = v[..common].to_vec();
    let (red_child, v_child) = (red[common], v[common]);
    let mut s = split_at(f, z, SplitKind::RedleafAncestor, Some(red_child))?;
    // after moving the red part to the front, the centroid part shifts by one
    // if it was before the red part
    let vi = if v_child < red_child { v_child + 1 } else { v_child };
    let p = s.parts.remove(vi);
    s.parts.insert(1, p);
    Ok(s)
}

/// The d-ary variant: a stump plus the child parts at the split vertex.
/// Redleaf inputs follow [`split_for_redleaf`].
pub fn split_dary(f: &Shape, redleaf: bool) -> Result<Split> {
    if redleaf {
        split_for_redleaf(f)
    } else {
        split_for_universal(f)
    }
}
