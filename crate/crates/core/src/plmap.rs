//! Continuous piecewise-linear self-maps of trees.
//!
//! A map is given per directed edge by an increasing list of breakpoints with
//! image points; between consecutive breakpoints the image traverses the arc
//! between the two breakpoint images at constant speed. All solving is exact.

use crate::rat::{format_rat, parse_rat, Rat};
use crate::tree::{Arc, EdgeIx, Point, PointSpec, Segment, Tree, TreeError, TreeSpec, VertexIx, VertexSpec};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::sync::Arc as Rc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum MapError {
    #[error("edge {0}-{1}: breakpoints must start at 0, end at 1, strictly increasing")]
    BadBreakpoints(String, String),
    #[error("edge {0}-{1} has no piece data")]
    MissingEdge(String, String),
    #[error("map not continuous at vertex {0}")]
    Discontinuous(String),
    #[error("image of point {0} is a vertex; one-sided classification undefined")]
    VertexImage(String),
    #[error("tree error: {0}")]
    Tree(#[from] TreeError),
}

/// One breakpoint of a piecewise-linear edge description.
#[derive(Debug, Clone)]
pub struct Break {
    pub t: Rat,
    pub image: Point,
}

/// A continuous piecewise-linear self-map of a tree.
#[derive(Debug, Clone)]
pub struct PLTreeMap {
    tree: Rc<Tree>,
    breaks: Vec<Vec<Break>>, // indexed by edge child vertex; root slot empty
    arcs: Vec<Vec<Arc>>,     // image arc per piece
    vertex_image: Vec<Point>,
}

/// Wire form of a map; the tree may be inlined.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeSpec>,
    pub pieces: Vec<EdgePiecesSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgePiecesSpec {
    pub edge: (String, String),
    pub breaks: Vec<BreakSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BreakSpec {
    pub t: String,
    pub image: PointSpec,
}

impl PLTreeMap {
    pub fn build(tree: Rc<Tree>, mut edge_breaks: Vec<(EdgeIx, Vec<Break>)>) -> Result<PLTreeMap, MapError> {
        let n = tree.vertex_count();
        let mut breaks: Vec<Vec<Break>> = vec![Vec::new(); n];
        edge_breaks.sort_by_key(|(e, _)| e.0);
        for (e, bs) in edge_breaks {
            breaks[e.0] = bs;
        }
        for e in tree.edges() {
            let bs = &breaks[e.0];
            let (u, v) = tree.edge_name(e);
            if bs.is_empty() {
                return Err(MapError::MissingEdge(u, v));
            }
            if !bs[0].t.is_zero() || !bs[bs.len() - 1].t.is_one() {
                return Err(MapError::BadBreakpoints(u, v));
            }
            if bs.windows(2).any(|w| w[0].t >= w[1].t) {
                return Err(MapError::BadBreakpoints(u, v));
            }
        }
        // Vertex images: taken from edge ends, must agree across incident edges.
        let mut vertex_image: Vec<Option<Point>> = vec![None; n];
        for e in tree.edges() {
            let bs = &breaks[e.0];
            let pv = tree.edge_parent(e).0;
            let cv = tree.edge_child(e).0;
            for (vix, img) in [(pv, &bs[0].image), (cv, &bs[bs.len() - 1].image)] {
                match &vertex_image[vix] {
                    None => vertex_image[vix] = Some(img.clone()),
                    Some(prev) if prev == img => {}
                    Some(_) => {
                        return Err(MapError::Discontinuous(tree.vertex_name(VertexIx(vix)).to_string()))
                    }
                }
            }
        }
        let vertex_image: Vec<Point> = vertex_image
            .into_iter()
            .map(|o| o.expect("every vertex touches an edge"))
            .collect();
        let mut arcs: Vec<Vec<Arc>> = vec![Vec::new(); n];
        for e in tree.edges() {
            let bs = &breaks[e.0];
            arcs[e.0] = bs
                .windows(2)
                .map(|w| tree.hull(&w[0].image, &w[1].image))
                .collect();
        }
        Ok(PLTreeMap {
            tree,
            breaks,
            arcs,
            vertex_image,
        })
    }

    pub fn from_spec(spec: &MapSpec, tree: Option<Rc<Tree>>) -> Result<PLTreeMap, MapError> {
        let tree = match (tree, &spec.tree) {
            (Some(t), _) => t,
            (None, Some(ts)) => Rc::new(Tree::build(ts)?),
            (None, None) => {
                return Err(MapError::Tree(TreeError::UnknownVertex(
                    "map spec has no tree and none was supplied".into(),
                )))
            }
        };
        let mut edge_breaks = Vec::new();
        for ep in &spec.pieces {
            let e = tree
                .edge_by_names(&ep.edge.0, &ep.edge.1)
                .ok_or_else(|| TreeError::UnknownVertex(format!("{}-{}", ep.edge.0, ep.edge.1)))?;
            let mut bs = Vec::new();
            for b in &ep.breaks {
                let t = parse_rat(&b.t).map_err(|_| TreeError::BadPointLiteral(b.t.clone()))?;
                bs.push(Break {
                    t,
                    image: b.image.to_point(&tree)?,
                });
            }
            edge_breaks.push((e, bs));
        }
        PLTreeMap::build(tree, edge_breaks)
    }

    pub fn to_spec(&self, inline_tree: bool) -> MapSpec {
        MapSpec {
            tree: inline_tree.then(|| self.tree.to_spec()),
            pieces: self
                .tree
                .edges()
                .map(|e| EdgePiecesSpec {
                    edge: self.tree.edge_name(e),
                    breaks: self.breaks[e.0]
                        .iter()
                        .map(|b| BreakSpec {
                            t: format_rat(&b.t),
                            image: PointSpec::from_point(&self.tree, &b.image),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Builds an interval map on the unit-edge tree `v0-v1` from a scalar
    /// piecewise-linear graph `(t, f(t))`.
    pub fn interval_from_graph(points: &[(Rat, Rat)]) -> PLTreeMap {
        let tree = Rc::new(
            Tree::build(&TreeSpec {
                root: "v0".into(),
                vertices: vec![VertexSpec {
                    id: "v1".into(),
                    parent: "v0".into(),
                    index: 1,
                    length: Rat::one(),
                }],
            })
            .unwrap(),
        );
        let e = tree.edge_by_names("v0", "v1").unwrap();
        let bs = points
            .iter()
            .map(|(t, v)| Break {
                t: t.clone(),
                image: tree.point_on(e, v.clone()),
            })
            .collect();
        PLTreeMap::build(tree, vec![(e, bs)]).unwrap()
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn tree_rc(&self) -> Rc<Tree> {
        self.tree.clone()
    }

    pub fn breaks(&self, e: EdgeIx) -> &[Break] {
        &self.breaks[e.0]
    }

    pub fn piece_count(&self, e: EdgeIx) -> usize {
        self.breaks[e.0].len() - 1
    }

    pub fn piece_arc(&self, e: EdgeIx, k: usize) -> &Arc {
        &self.arcs[e.0][k]
    }

    pub fn vertex_image(&self, v: VertexIx) -> &Point {
        &self.vertex_image[v.0]
    }

    /// Exact image of a point.
    pub fn eval(&self, x: &Point) -> Point {
        match x {
            Point::Vertex(v) => self.vertex_image[v.0].clone(),
            Point::Edge { edge, t } => {
                let bs = &self.breaks[edge.0];
                let k = match bs.binary_search_by(|b| b.t.cmp(t)) {
                    Ok(i) => return bs[i].image.clone(),
                    Err(i) => i - 1,
                };
                let arc = &self.arcs[edge.0][k];
                let len = self.tree.arc_len(arc);
                if len.is_zero() {
                    return bs[k].image.clone();
                }
                let frac = (t - &bs[k].t) / (&bs[k + 1].t - &bs[k].t);
                self.tree.arc_point_at(arc, &(frac * len))
            }
        }
    }

    pub fn eval_iter(&self, x: &Point, n: usize) -> Point {
        let mut p = x.clone();
        for _ in 0..n {
            p = self.eval(&p);
        }
        p
    }

    /// The complete exact preimage set of `y`: isolated points plus maximal
    /// nondegenerate intervals on which the map is constant at `y`.
    pub fn preimages(&self, y: &Point) -> Preimages {
        let mut points: Vec<Point> = Vec::new();
        let mut intervals: Vec<(EdgeIx, Rat, Rat)> = Vec::new();
        for e in self.tree.edges() {
            let bs = &self.breaks[e.0];
            for k in 0..bs.len() - 1 {
                let arc = &self.arcs[e.0][k];
                let len = self.tree.arc_len(arc);
                if len.is_zero() {
                    if &bs[k].image == y {
                        intervals.push((e, bs[k].t.clone(), bs[k + 1].t.clone()));
                    }
                    continue;
                }
                if let Some(d) = self.tree.arc_locate(arc, y) {
                    let t = &bs[k].t + (&d / &len) * (&bs[k + 1].t - &bs[k].t);
                    points.push(self.tree.point_on(e, t));
                }
            }
        }
        // Merge adjacent plateau intervals on the same edge.
        intervals.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let mut merged: Vec<(EdgeIx, Rat, Rat)> = Vec::new();
        for (e, lo, hi) in intervals {
            match merged.last_mut() {
                Some((pe, _, phi)) if *pe == e && *phi >= lo => {
                    if hi > *phi {
                        *phi = hi;
                    }
                }
                _ => merged.push((e, lo, hi)),
            }
        }
        points.sort();
        points.dedup();
        // Drop isolated points already inside a plateau interval.
        points.retain(|p| {
            !merged.iter().any(|(e, lo, hi)| {
                self.tree
                    .position_on_edge(p, *e)
                    .map(|t| t >= *lo && t <= *hi)
                    .unwrap_or(false)
            })
        });
        Preimages {
            points,
            intervals: merged,
        }
    }

    /// Minimum and maximum of the preimage set under the tree ordering.
    /// Interval preimages contribute their endpoint extremes.
    pub fn extreme_preimages(&self, y: &Point) -> Option<(Point, Point)> {
        let pre = self.preimages(y);
        let mut all = pre.points.clone();
        for (e, lo, hi) in &pre.intervals {
            all.push(self.tree.point_on(*e, lo.clone()));
            all.push(self.tree.point_on(*e, hi.clone()));
        }
        if all.is_empty() {
            return None;
        }
        let mn = self.tree.order_min(all.iter()).unwrap();
        let mx = self.tree.order_max(all.iter()).unwrap();
        Some((mn, mx))
    }

    /// One-sided germs at `x`: (edge, position of x on it, direction sign).
    pub fn germs_at(&self, x: &Point) -> Vec<(EdgeIx, Rat, i8)> {
        match x {
            Point::Edge { edge, t } => vec![(*edge, t.clone(), -1), (*edge, t.clone(), 1)],
            Point::Vertex(v) => {
                let mut out = Vec::new();
                if let Some(_p) = self.tree.parent(*v) {
                    out.push((EdgeIx(v.0), Rat::one(), -1));
                }
                for c in self.tree.children(*v) {
                    out.push((EdgeIx(c.0), Rat::zero(), 1));
                }
                out
            }
        }
    }

    /// Where the image of a one-sided germ moves relative to `y = f(x)`:
    /// constant at `y`, to the parent side, or to the child side of `y`'s edge.
    /// `y` must not be a vertex.
    pub fn germ_side(&self, edge: EdgeIx, at: &Rat, dir: i8) -> GermSide {
        let bs = &self.breaks[edge.0];
        // piece on the dir side of `at`
        let k = if dir > 0 {
            (0..bs.len() - 1)
                .find(|&k| bs[k].t <= *at && *at < bs[k + 1].t)
                .expect("position inside edge")
        } else {
            (0..bs.len() - 1)
                .find(|&k| bs[k].t < *at && *at <= bs[k + 1].t)
                .expect("position inside edge")
        };
        let arc = &self.arcs[edge.0][k];
        let len = self.tree.arc_len(arc);
        if len.is_zero() {
            return GermSide::Stay;
        }
        let frac = (at - &bs[k].t) / (&bs[k + 1].t - &bs[k].t);
        let d = frac * &len;
        // Walk segments to find the one covering a one-sided neighborhood of d
        // in arc direction `dir`.
        let mut acc = Rat::zero();
        for s in &arc.segments {
            let sl = (&s.to - &s.from).abs() * self.tree.edge_len(s.edge);
            let next = &acc + &sl;
            let inside = if dir > 0 { acc <= d && d < next } else { acc < d && d <= next };
            if inside {
                let seg_up = s.to > s.from;
                let moves_up = if dir > 0 { seg_up } else { !seg_up };
                return if moves_up { GermSide::Up } else { GermSide::Down };
            }
            acc = next;
        }
        // d at the very end moving forward, or at 0 moving backward: clamp to
        // the adjacent segment.
        let s = if dir > 0 { arc.segments.last() } else { arc.segments.first() };
        match s {
            Some(s) => {
                let seg_up = s.to > s.from;
                let moves_up = if dir > 0 { seg_up } else { !seg_up };
                if moves_up {
                    GermSide::Up
                } else {
                    GermSide::Down
                }
            }
            None => GermSide::Stay,
        }
    }

    /// Non-minimal / non-maximal flags of a preimage point `x` of `y = f(x)`.
    /// Errors when `y` is a vertex (no two-sided interval order there).
    pub fn classify_preimage(&self, x: &Point) -> Result<PreimageClass, MapError> {
        let y = self.eval(x);
        if y.is_vertex() {
            return Err(MapError::VertexImage(self.tree.format_point(x)));
        }
        let mut non_minimal = false;
        let mut non_maximal = false;
        for (e, at, dir) in self.germs_at(x) {
            match self.germ_side(e, &at, dir) {
                GermSide::Down => non_minimal = true,
                GermSide::Up => non_maximal = true,
                GermSide::Stay => {}
            }
        }
        Ok(PreimageClass {
            non_minimal,
            non_maximal,
        })
    }

    /// Classifies the outgoing branch germs at a fixed vertex: a germ whose
    /// first piece is nondegenerate maps into a single closed branch
    /// (monotone); a degenerate first piece sends the germ to the vertex
    /// itself, the nonmonotone class for piecewise-linear data.
    pub fn outgoing_germ_monotone(&self, y: VertexIx) -> Vec<(EdgeIx, bool)> {
        self.tree
            .children(y)
            .map(|c| {
                let e = EdgeIx(c.0);
                let arc = &self.arcs[e.0][0];
                (e, !self.tree.arc_len(arc).is_zero())
            })
            .collect()
    }

    /// Incoming germ monotonicity at a non-root vertex (last piece of the
    /// incoming edge).
    pub fn incoming_germ_monotone(&self, y: VertexIx) -> Option<bool> {
        self.tree.parent(y)?;
        let e = EdgeIx(y.0);
        let arc = self.arcs[e.0].last().unwrap();
        Some(!self.tree.arc_len(arc).is_zero())
    }

    /// Rebuilds the tree with outgoing branch indices permuted at each fixed
    /// branchpoint so monotone outgoing edges come first; a stable permutation,
    /// all other numbering untouched.
    pub fn f_adjusted_tree(&self) -> Tree {
        let mut spec = self.tree.to_spec();
        for y in self.tree.branchpoints() {
            if self.eval(&Point::Vertex(y)) != Point::Vertex(y) {
                continue;
            }
            let classes = self.outgoing_germ_monotone(y);
            let mut order: Vec<(EdgeIx, bool)> = classes;
            order.sort_by_key(|(e, mono)| (!*mono, self.tree.branch_index_of(VertexIx(e.0))));
            for (new_ix, (e, _)) in order.iter().enumerate() {
                let name = self.tree.vertex_name(VertexIx(e.0));
                for vs in spec.vertices.iter_mut() {
                    if vs.id == name {
                        vs.index = new_ix + 1;
                    }
                }
            }
        }
        Tree::build(&spec).expect("permuted spec stays valid")
    }

    /// True when the union of piece images covers the whole tree.
    pub fn is_surjective(&self) -> bool {
        let mut cover: Vec<Vec<(Rat, Rat)>> = vec![Vec::new(); self.tree.vertex_count()];
        for e in self.tree.edges() {
            for arc in &self.arcs[e.0] {
                for s in &arc.segments {
                    let lo = s.from.clone().min(s.to.clone());
                    let hi = s.from.clone().max(s.to.clone());
                    cover[s.edge.0].push((lo, hi));
                }
            }
        }
        for e in self.tree.edges() {
            let mut ivs = cover[e.0].clone();
            ivs.sort();
            let mut reach = Rat::zero();
            for (lo, hi) in ivs {
                if lo > reach {
                    return false;
                }
                if hi > reach {
                    reach = hi;
                }
            }
            if reach < Rat::one() {
                return false;
            }
        }
        true
    }

    /// Per-sample preimage counts against the fold thresholds.
    pub fn mfold_report(&self, m: usize, samples: &[Point]) -> MFoldReport {
        let mut rows = Vec::new();
        let mut failing_m = Vec::new();
        let mut failing_2 = Vec::new();
        for y in samples {
            let pre = self.preimages(y);
            let count = if pre.intervals.is_empty() {
                PreimageCount::Finite(pre.points.len())
            } else {
                PreimageCount::Infinite
            };
            let at_least_m = match count {
                PreimageCount::Infinite => true,
                PreimageCount::Finite(c) => c >= m,
            };
            let at_least_2 = match count {
                PreimageCount::Infinite => true,
                PreimageCount::Finite(c) => c >= 2,
            };
            if !at_least_m {
                failing_m.push(y.clone());
            }
            if !at_least_2 {
                failing_2.push(y.clone());
            }
            rows.push((y.clone(), count, at_least_m, at_least_2));
        }
        MFoldReport {
            m,
            samples: rows,
            failing_m,
            failing_2,
        }
    }

    /// Uniform interior grid on every edge at the given resolution.
    pub fn grid_samples(&self, resolution: &Rat) -> Vec<Point> {
        grid_on_tree(&self.tree, resolution)
    }
}

/// Interior grid points of every edge, step `resolution` in edge coordinates.
pub fn grid_on_tree(tree: &Tree, resolution: &Rat) -> Vec<Point> {
    let mut out = Vec::new();
    for e in tree.edges() {
        let mut t = resolution.clone();
        while t < Rat::one() {
            out.push(Point::Edge { edge: e, t: t.clone() });
            t += resolution;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preimages {
    pub points: Vec<Point>,
    /// Closed nondegenerate intervals `(edge, lo, hi)` mapping constantly to y.
    pub intervals: Vec<(EdgeIx, Rat, Rat)>,
}

impl Preimages {
    pub fn component_count(&self) -> usize {
        self.points.len() + self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.intervals.is_empty()
    }

    /// Representative points: isolated points plus interval endpoints.
    pub fn representatives(&self, tree: &Tree) -> Vec<Point> {
        let mut out = self.points.clone();
        for (e, lo, hi) in &self.intervals {
            out.push(tree.point_on(*e, lo.clone()));
            out.push(tree.point_on(*e, hi.clone()));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GermSide {
    Stay,
    Down,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreimageClass {
    pub non_minimal: bool,
    pub non_maximal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreimageCount {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone)]
pub struct MFoldReport {
    pub m: usize,
    pub samples: Vec<(Point, PreimageCount, bool, bool)>,
    pub failing_m: Vec<Point>,
    pub failing_2: Vec<Point>,
}

impl MFoldReport {
    pub fn all_pass_m(&self) -> bool {
        self.failing_m.is_empty()
    }
    pub fn all_pass_2(&self) -> bool {
        self.failing_2.is_empty()
    }
}

/// Structural ordering helper for point keys in sorted containers.
pub fn point_key_cmp(a: &Point, b: &Point) -> Ordering {
    a.cmp(b)
}

/// The exact linear pieces of the map, each mapping a domain subinterval of
/// one edge affinely into a single image edge. Degenerate pieces keep
/// `img_lo == img_hi`.
#[derive(Debug, Clone)]
pub struct LinPiece {
    pub edge: EdgeIx,
    pub lo: Rat,
    pub hi: Rat,
    pub img_edge: EdgeIx,
    pub img_lo: Rat,
    pub img_hi: Rat,
}

impl PLTreeMap {
    /// Canonical (edge, position) form of a point; vertices attach to their
    /// incoming edge, the root to its first child edge.
    pub fn canonical_coords(&self, p: &Point) -> (EdgeIx, Rat) {
        match p {
            Point::Edge { edge, t } => (*edge, t.clone()),
            Point::Vertex(v) => {
                if self.tree.parent(*v).is_some() {
                    (EdgeIx(v.0), Rat::one())
                } else {
                    let c = self.tree.children(*v).next().expect("root has a child");
                    (EdgeIx(c.0), Rat::zero())
                }
            }
        }
    }

    pub fn linear_pieces(&self) -> Vec<LinPiece> {
        let mut out = Vec::new();
        for e in self.tree.edges() {
            let bs = &self.breaks[e.0];
            for k in 0..bs.len() - 1 {
                let arc = &self.arcs[e.0][k];
                let total = self.tree.arc_len(arc);
                let dom_lo = &bs[k].t;
                let dom_hi = &bs[k + 1].t;
                if total.is_zero() {
                    let (ie, ip) = self.canonical_coords(&bs[k].image);
                    out.push(LinPiece {
                        edge: e,
                        lo: dom_lo.clone(),
                        hi: dom_hi.clone(),
                        img_edge: ie,
                        img_lo: ip.clone(),
                        img_hi: ip,
                    });
                    continue;
                }
                let mut acc = Rat::zero();
                for s in &arc.segments {
                    let sl = (&s.to - &s.from).abs() * self.tree.edge_len(s.edge);
                    let a = dom_lo + (&acc / &total) * (dom_hi - dom_lo);
                    let b = dom_lo + ((&acc + &sl) / &total) * (dom_hi - dom_lo);
                    out.push(LinPiece {
                        edge: e,
                        lo: a,
                        hi: b,
                        img_edge: s.edge,
                        img_lo: s.from.clone(),
                        img_hi: s.to.clone(),
                    });
                    acc += sl;
                }
            }
        }
        out
    }
}

pub fn segment_len(tree: &Tree, s: &Segment) -> Rat {
    (&s.to - &s.from).abs() * tree.edge_len(s.edge)
}

#[cfg(test)]
pub mod fixtures {
    use super::*;
    use crate::rat::{rat, rat_int};

    /// The flattened tent map: 3x, then constant 1, then 3(1-x).
    pub fn flat_tent() -> PLTreeMap {
        PLTreeMap::interval_from_graph(&[
            (rat_int(0), rat_int(0)),
            (rat(1, 3), rat_int(1)),
            (rat(2, 3), rat_int(1)),
            (rat_int(1), rat_int(0)),
        ])
    }

    pub fn tent() -> PLTreeMap {
        PLTreeMap::interval_from_graph(&[
            (rat_int(0), rat_int(0)),
            (rat(1, 2), rat_int(1)),
            (rat_int(1), rat_int(0)),
        ])
    }

    pub fn identity() -> PLTreeMap {
        PLTreeMap::interval_from_graph(&[(rat_int(0), rat_int(0)), (rat_int(1), rat_int(1))])
    }

    pub fn unit_pt(map: &PLTreeMap, num: i64, den: i64) -> Point {
        let e = map.tree().edge_by_names("v0", "v1").unwrap();
        map.tree().point_on(e, rat(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn eval_flat_tent() {
        let g = flat_tent();
        assert_eq!(g.eval(&unit_pt(&g, 1, 2)), unit_pt(&g, 1, 1));
        assert_eq!(g.eval(&unit_pt(&g, 1, 3)), unit_pt(&g, 1, 1));
        assert_eq!(g.eval(&unit_pt(&g, 1, 6)), unit_pt(&g, 1, 2));
        assert_eq!(g.eval(&unit_pt(&g, 0, 1)), unit_pt(&g, 0, 1));
    }

    #[test]
    fn preimages_flat_tent() {
        let g = flat_tent();
        let pre = g.preimages(&unit_pt(&g, 1, 2));
        assert_eq!(pre.points, vec![unit_pt(&g, 1, 6), unit_pt(&g, 5, 6)]);
        assert!(pre.intervals.is_empty());

        let top = g.preimages(&unit_pt(&g, 1, 1));
        assert!(top.points.is_empty());
        assert_eq!(top.intervals.len(), 1);
        assert_eq!((top.intervals[0].1.clone(), top.intervals[0].2.clone()), (rat(1, 3), rat(2, 3)));

        let zero = g.preimages(&unit_pt(&g, 0, 1));
        assert_eq!(zero.points, vec![unit_pt(&g, 0, 1), unit_pt(&g, 1, 1)]);
    }

    #[test]
    fn extremes() {
        let g = flat_tent();
        let (mn, mx) = g.extreme_preimages(&unit_pt(&g, 1, 2)).unwrap();
        assert_eq!(mn, unit_pt(&g, 1, 6));
        assert_eq!(mx, unit_pt(&g, 5, 6));
        let (mn, mx) = g.extreme_preimages(&unit_pt(&g, 1, 1)).unwrap();
        assert_eq!(mn, unit_pt(&g, 1, 3));
        assert_eq!(mx, unit_pt(&g, 2, 3));
        let id = identity();
        let y = unit_pt(&id, 2, 7);
        assert_eq!(id.extreme_preimages(&y).unwrap(), (y.clone(), y));
    }

    #[test]
    fn classify_slopes() {
        let g = flat_tent();
        let c = g.classify_preimage(&unit_pt(&g, 1, 6)).unwrap();
        assert!(c.non_minimal && c.non_maximal);
        // image is the endpoint vertex 1
        assert!(g.classify_preimage(&unit_pt(&g, 1, 3)).is_err());
        let t = tent();
        let c = t.classify_preimage(&unit_pt(&t, 1, 4)).unwrap();
        assert!(c.non_minimal && c.non_maximal);
    }

    #[test]
    fn plateau_stays() {
        let g = flat_tent();
        // interior of the plateau: both germs constant
        let c = g.classify_preimage(&unit_pt(&g, 1, 2));
        // f(1/2) = 1 is a vertex, classification refuses
        assert!(c.is_err());
    }

    #[test]
    fn mfold_counts() {
        let g = flat_tent();
        let samples: Vec<Point> = (1..20).map(|k| unit_pt(&g, k, 20)).collect();
        let rep = g.mfold_report(2, &samples);
        assert!(rep.all_pass_2() && rep.all_pass_m());

        let t = tent();
        let rep = t.mfold_report(2, &[unit_pt(&t, 1, 1)]);
        assert!(!rep.all_pass_m());

        let id = identity();
        let rep = id.mfold_report(2, &[unit_pt(&id, 1, 2)]);
        assert!(!rep.all_pass_m());
    }

    #[test]
    fn surjectivity() {
        assert!(flat_tent().is_surjective());
        assert!(tent().is_surjective());
        let half = PLTreeMap::interval_from_graph(&[(rat_int(0), rat_int(0)), (rat_int(1), rat(1, 2))]);
        assert!(!half.is_surjective());
    }

    #[test]
    fn f_adjust_interval_noop() {
        let g = flat_tent();
        let adj = g.f_adjusted_tree();
        assert_eq!(adj.to_spec().vertices.len(), 1);
    }

    #[test]
    fn map_spec_roundtrip() {
        let g = flat_tent();
        let spec = g.to_spec(true);
        let json = serde_json::to_string(&spec).unwrap();
        let back: MapSpec = serde_json::from_str(&json).unwrap();
        let g2 = PLTreeMap::from_spec(&back, None).unwrap();
        assert_eq!(g2.eval(&unit_pt(&g2, 1, 6)), unit_pt(&g2, 1, 2));
    }

    #[test]
    fn linear_pieces_cover_domain() {
        let g = flat_tent();
        let pieces = g.linear_pieces();
        assert_eq!(pieces.len(), 3);
        assert_eq!(pieces[0].img_lo, rat_int(0));
        assert_eq!(pieces[0].img_hi, rat_int(1));
        assert_eq!(pieces[1].img_lo, pieces[1].img_hi);
    }
}
