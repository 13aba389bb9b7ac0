//! Markov incidence matrices for piecewise-linear tree maps and a certified
//! spectral-radius entropy device.
//!
//! The spectral radius of a nonnegative integer matrix is enclosed with
//! Collatz-Wielandt bounds per strongly connected component; the reported
//! entropy carries a rigorous interval, not a bare float.

use crate::plmap::{MapError, PLTreeMap};
use crate::rat::{format_rat, Rat};
use crate::tree::{EdgeIx, Point};
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, thiserror::Error)]
pub enum MarkovError {
    #[error("map is not Markov: breakpoint {0} on edge {1}-{2} maps to {3}, not a partition point")]
    NotMarkov(String, String, String, String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// One partition interval: an edge sub-segment between consecutive breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixState {
    pub edge: EdgeIx,
    pub lo: Rat,
    pub hi: Rat,
}

/// Covering counts between partition intervals. Pieces with degenerate image
/// keep their row (all zeros): they cover nothing but can be covered.
#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    pub states: Vec<MatrixState>,
    pub entries: Vec<Vec<u64>>,
}

impl IncidenceMatrix {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn transpose(&self) -> IncidenceMatrix {
        let n = self.dim();
        let mut entries = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                entries[j][i] = self.entries[i][j];
            }
        }
        IncidenceMatrix {
            states: self.states.clone(),
            entries,
        }
    }

    pub fn from_entries(entries: Vec<Vec<u64>>) -> IncidenceMatrix {
        let states = (0..entries.len())
            .map(|_| MatrixState {
                edge: EdgeIx(usize::MAX),
                lo: Rat::zero(),
                hi: Rat::zero(),
            })
            .collect();
        IncidenceMatrix { states, entries }
    }
}

/// Builds the incidence matrix of a Markov map: entry (i, j) counts how many
/// times the image arc of piece i covers piece j.
pub fn incidence_matrix(map: &PLTreeMap) -> Result<IncidenceMatrix, MarkovError> {
    let tree = map.tree();
    // Markov check: every breakpoint image is a vertex or a breakpoint.
    for e in tree.edges() {
        let (u, v) = tree.edge_name(e);
        for b in map.breaks(e) {
            let ok = match &b.image {
                Point::Vertex(_) => true,
                Point::Edge { edge, t } => map.breaks(*edge).iter().any(|bb| &bb.t == t),
            };
            if !ok {
                return Err(MarkovError::NotMarkov(
                    format_rat(&b.t),
                    u,
                    v,
                    tree.format_point(&b.image),
                ));
            }
        }
    }
    let mut states = Vec::new();
    for e in tree.edges() {
        let bs = map.breaks(e);
        for k in 0..bs.len() - 1 {
            states.push(MatrixState {
                edge: e,
                lo: bs[k].t.clone(),
                hi: bs[k + 1].t.clone(),
            });
        }
    }
    let n = states.len();
    let mut entries = vec![vec![0u64; n]; n];
    let mut row = 0usize;
    for e in tree.edges() {
        let bs = map.breaks(e);
        for k in 0..bs.len() - 1 {
            let arc = map.piece_arc(e, k);
            for (j, st) in states.iter().enumerate() {
                for s in &arc.segments {
                    if s.edge != st.edge {
                        continue;
                    }
                    let lo = s.from.clone().min(s.to.clone());
                    let hi = s.from.clone().max(s.to.clone());
                    if lo <= st.lo && st.hi <= hi {
                        entries[row][j] += 1;
                    }
                }
            }
            row += 1;
        }
    }
    Ok(IncidenceMatrix { states, entries })
}

/// Rigorous enclosure of log(spectral radius).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EntropyEnclosure {
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub entropy: f64,
    pub entropy_lo: f64,
    pub entropy_hi: f64,
}

impl EntropyEnclosure {
    pub fn width(&self) -> f64 {
        self.entropy_hi - self.entropy_lo
    }
}

/// log(spectral radius) via power iteration with Collatz-Wielandt bounds,
/// taken componentwise over strongly connected components. Nilpotent and zero
/// matrices give entropy 0.
pub fn markov_entropy(mat: &IncidenceMatrix) -> EntropyEnclosure {
    let n = mat.dim();
    if n == 0 {
        return zero_enclosure();
    }
    let sccs = strongly_connected(&mat.entries);
    let mut rho_lo = 0.0f64;
    let mut rho_hi = 0.0f64;
    let mut any = false;
    for scc in sccs {
        if scc.len() == 1 {
            let i = scc[0];
            if mat.entries[i][i] == 0 {
                continue;
            }
        }
        let (lo, hi) = scc_radius(&mat.entries, &scc);
        if hi > rho_hi {
            rho_hi = hi;
        }
        if lo > rho_lo {
            rho_lo = lo;
        }
        any = true;
    }
    if !any {
        return zero_enclosure();
    }
    // Integer matrices with a cycle have rho >= 1.
    rho_lo = rho_lo.max(1.0);
    let entropy_lo = rho_lo.ln();
    let entropy_hi = rho_hi.ln();
    EntropyEnclosure {
        rho_lo,
        rho_hi,
        entropy: 0.5 * (entropy_lo + entropy_hi),
        entropy_lo,
        entropy_hi,
    }
}

fn zero_enclosure() -> EntropyEnclosure {
    EntropyEnclosure {
        rho_lo: 0.0,
        rho_hi: 0.0,
        entropy: 0.0,
        entropy_lo: 0.0,
        entropy_hi: 0.0,
    }
}

/// Collatz-Wielandt enclosure of the Perron root of an irreducible component,
/// run on A+I (primitive) so the bounds converge; both bounds stay valid at
/// every iteration.
fn scc_radius(entries: &[Vec<u64>], scc: &[usize]) -> (f64, f64) {
    let k = scc.len();
    let sub: Vec<Vec<f64>> = scc
        .iter()
        .map(|&i| scc.iter().map(|&j| entries[i][j] as f64 + f64::from(i == j)).collect())
        .collect();
    let mut x = vec![1.0f64; k];
    let mut best_lo = 0.0f64;
    let mut best_hi = f64::INFINITY;
    for _ in 0..20_000 {
        let mut y = vec![0.0f64; k];
        for i in 0..k {
            for j in 0..k {
                y[i] += sub[i][j] * x[j];
            }
        }
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..k {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if lo > best_lo {
            best_lo = lo;
        }
        if hi < best_hi {
            best_hi = hi;
        }
        if best_hi - best_lo < 1e-11 {
            break;
        }
        let norm = y.iter().cloned().fold(0.0f64, f64::max);
        for v in y.iter_mut() {
            *v /= norm;
        }
        x = y;
    }
    // Margin for f64 rounding in the bound evaluation.
    ((best_lo - 1.0) - 1e-12 * best_lo.abs(), (best_hi - 1.0) + 1e-12 * best_hi.abs())
}

/// Tarjan strongly connected components of the nonzero-entry digraph.
fn strongly_connected(entries: &[Vec<u64>]) -> Vec<Vec<usize>> {
    let n = entries.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0usize;
    let mut out = Vec::new();

    // Iterative Tarjan: (vertex, next edge target)
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(&mut (v, ref mut e)) = call.last_mut() {
            if *e == 0 {
                index[v] = next;
                low[v] = next;
                next += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let mut advanced = false;
            while *e < n {
                let w = *e;
                *e += 1;
                if entries[v][w] == 0 {
                    continue;
                }
                if index[w] == usize::MAX {
                    call.push((w, 0));
                    advanced = true;
                    break;
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            }
            if advanced {
                continue;
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                out.push(comp);
            }
            call.pop();
            if let Some(&mut (p, _)) = call.last_mut() {
                low[p] = low[p].min(low[v]);
            }
        }
    }
    out
}

/// Number of admissible state words of each length 1..=n_max in the 0/1
/// transition structure of the matrix (entry > 0 means the step is allowed).
pub fn admissible_word_counts(mat: &IncidenceMatrix, n_max: usize) -> Vec<u128> {
    let n = mat.dim();
    let mut counts = Vec::with_capacity(n_max);
    let mut vec = vec![1u128; n]; // words of length 1 ending at each state
    counts.push(n as u128);
    for _ in 2..=n_max {
        let mut next = vec![0u128; n];
        for i in 0..n {
            if vec[i] == 0 {
                continue;
            }
            for j in 0..n {
                if mat.entries[i][j] > 0 {
                    next[j] += vec[i];
                }
            }
        }
        vec = next;
        counts.push(vec.iter().sum());
    }
    counts
}
