//! Graph joins of regular graphs and their spectra and energies.
//!
//! A `d`-regular graph on `n` vertices has the eigenpair `(d, e_n)` with
//! `e_n` the normalized all-ones vector. Coupling the adjacency matrices
//! with `rho_ij = sqrt(n_i n_j)` turns every cross block into all-ones, so
//! the coupled block matrix is the adjacency matrix of the join and its
//! spectrum follows from the small coupling matrix.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blockforge::{assemble, chain, chain_rho, AssembledSystem, BlockSystem};
use crate::error::{Error, Result};
use crate::numkit::{jacobi_eigs, qr_eigs_small, DenseMatrix, EigenPair, Spectrum};

const GRAPH_EIG_TOL: f64 = 1e-13;

/// Simple undirected graph stored as a symmetric 0/1 adjacency matrix with
/// zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: DenseMatrix,
}

impl Graph {
    pub fn from_adjacency(adjacency: DenseMatrix) -> Result<Self> {
        adjacency.ensure_square()?;
        let n = adjacency.rows();
        for i in 0..n {
            if adjacency[(i, i)] != 0.0 {
                return Err(Error::Graph(format!("loop at vertex {i}")));
            }
            for j in 0..n {
                let x = adjacency[(i, j)];
                if x != 0.0 && x != 1.0 {
                    return Err(Error::Graph(format!("entry ({i}, {j}) = {x} is not 0 or 1")));
                }
                if x != adjacency[(j, i)] {
                    return Err(Error::Graph(format!("adjacency not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { adjacency })
    }

    /// Rejects loops, repeated edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Graph("graph needs at least one vertex".into()));
        }
        let mut adjacency = DenseMatrix::zeros(n, n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Graph(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::Graph(format!("loop at vertex {u}")));
            }
            if adjacency[(u, v)] != 0.0 {
                return Err(Error::Graph(format!("duplicate edge ({u}, {v})")));
            }
            adjacency[(u, v)] = 1.0;
            adjacency[(v, u)] = 1.0;
        }
        Ok(Self { adjacency })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, &[])
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Graph(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    /// Parses the edge-list text format: a header line `n m` followed by
    /// `m` lines `u v` with 0-based vertex indices. Blank lines and lines
    /// starting with `#` or `%` are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with('%'));

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header line \"n m\"".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;
        if n == 0 {
            return Err(Error::Parse {
                line: hline,
                message: "vertex count must be positive".into(),
            });
        }

        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines {
            if edges.len() == m {
                return Err(Error::Parse {
                    line,
                    message: format!("more than the declared {m} edges"),
                });
            }
            let [u, v] = parse_pair(line, body)?;
            let fail = |message: String| Error::Parse { line, message };
            if u >= n || v >= n {
                return Err(fail(format!("vertex index out of range 0..{n}")));
            }
            if u == v {
                return Err(fail(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(fail(format!("duplicate edge {u} {v}")));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                message: format!("expected {m} edges, found {}", edges.len()),
            });
        }
        Self::from_edges(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn n(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn adjacency(&self) -> &DenseMatrix {
        &self.adjacency
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacency[(i, j)] == 1.0)
            .collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n())
            .map(|i| self.adjacency.row(i).iter().filter(|&&x| x == 1.0).count())
            .collect()
    }

    /// Adjacency spectrum from the Jacobi solver, descending.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(jacobi_eigs(&self.adjacency, GRAPH_EIG_TOL)?.spectrum)
    }
}

fn parse_pair(line: usize, body: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            message: format!("expected two integers, got {:?}", body),
        });
    }
    let mut out = [0usize; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f.parse().map_err(|_| Error::Parse {
            line,
            message: format!("{f:?} is not a nonnegative integer"),
        })?;
    }
    Ok(out)
}

/// A graph in which every vertex has the same degree.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularGraph {
    graph: Graph,
    degree: usize,
}

impl RegularGraph {
    pub fn new(graph: Graph) -> Result<Self> {
        let degrees = graph.degrees();
        let d = degrees[0];
        if let Some(v) = degrees.iter().position(|&x| x != d) {
            return Err(Error::Graph(format!(
                "graph is not regular: vertex 0 has degree {d}, vertex {v} has degree {}",
                degrees[v]
            )));
        }
        Ok(Self { graph, degree: d })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// `(d, e_n)`
    pub fn perron_pair(&self) -> EigenPair {
        EigenPair::uniform(self.degree as f64, self.n())
    }
}

/// Sum of the moduli of the eigenvalues.
pub fn energy(s: &Spectrum) -> f64 {
    s.values().iter().map(|z| z.norm()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinKind {
    /// Every pair of distinct parts fully connected.
    Full,
    /// Only consecutive parts fully connected.
    Chain,
}

#[derive(Debug, Clone)]
pub struct JoinResult {
    pub joined: Graph,
    pub predicted: Spectrum,
    /// Energy of `predicted`.
    pub energy: f64,
    /// The `k x k` coupling matrix.
    pub small: DenseMatrix,
    pub parts: Vec<RegularGraph>,
    pub kind: JoinKind,
}

impl JoinResult {
    /// `sum_j (E(G_j) - d_j) + E(small)`, with part spectra from the
    /// Jacobi solver and coupling eigenvalues from QR.
    pub fn energy_identity(&self) -> Result<f64> {
        let mut total = energy(&qr_eigs_small(&self.small)?);
        for part in &self.parts {
            total += energy(&part.graph.spectrum()?) - part.degree as f64;
        }
        Ok(total)
    }
}

/// Adjacency of the join built directly from the vertex sets.
pub fn join_graph(parts: &[RegularGraph], kind: JoinKind) -> Result<Graph> {
    if parts.is_empty() {
        return Err(Error::Graph("join of no graphs".into()));
    }
    let sizes: Vec<usize> = parts.iter().map(|p| p.n()).collect();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let n: usize = sizes.iter().sum();
    let mut adj = DenseMatrix::zeros(n, n);
    for (p, part) in parts.iter().enumerate() {
        adj.set_block(offsets[p], offsets[p], part.graph.adjacency());
        for q in 0..parts.len() {
            let linked = match kind {
                JoinKind::Full => p != q,
                JoinKind::Chain => p.abs_diff(q) == 1,
            };
            if linked {
                for i in 0..sizes[p] {
                    for j in 0..sizes[q] {
                        adj[(offsets[p] + i, offsets[q] + j)] = 1.0;
                    }
                }
            }
        }
    }
    Graph::from_adjacency(adj)
}

fn regular_block_system(parts: &[RegularGraph], rho: DenseMatrix) -> Result<BlockSystem> {
    let spectra = parts.iter().map(|p| p.graph.spectrum()).collect::<Result<Vec<_>>>()?;
    BlockSystem::new(
        parts.iter().map(|p| p.graph.adjacency().clone()).collect(),
        parts.iter().map(RegularGraph::perron_pair).collect(),
        spectra,
        rho,
    )
}

fn finish(parts: Vec<RegularGraph>, kind: JoinKind, assembled: AssembledSystem) -> Result<JoinResult> {
    let joined = join_graph(&parts, kind)?;
    debug_assert!(assembled.big.max_abs_diff(joined.adjacency()).unwrap_or(1.0) < 1e-12);
    let predicted = assembled.predicted.snap_real(1e-12);
    Ok(JoinResult {
        joined,
        energy: energy(&predicted),
        predicted,
        small: assembled.small,
        parts,
        kind,
    })
}

/// Full join of regular graphs.
pub fn join_all(parts: &[RegularGraph]) -> Result<JoinResult> {
    if parts.is_empty() {
        return Err(Error::Graph("join of no graphs".into()));
    }
    let k = parts.len();
    let mut rho = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                rho[(i, j)] = ((parts[i].n() * parts[j].n()) as f64).sqrt();
            }
        }
    }
    let sys = regular_block_system(parts, rho)?;
    finish(parts.to_vec(), JoinKind::Full, assemble(&sys)?)
}

/// `K_{n_1, ..., n_k}` as the join of edgeless graphs.
pub fn complete_multipartite(sizes: &[usize]) -> Result<JoinResult> {
    let parts = sizes
        .iter()
        .map(|&s| RegularGraph::new(Graph::empty(s)?))
        .collect::<Result<Vec<_>>>()?;
    join_all(&parts)
}

/// Join of `g` with `k - 1` randomly relabelled copies of itself, using
/// the closed-form spectrum. Copy `j` is relabelled with seed `j`.
pub fn join_isomorphic_copies(g: &RegularGraph, spectrum: &Spectrum, k: usize) -> Result<JoinResult> {
    join_isomorphic_copies_seeded(g, spectrum, k, 0)
}

/// As [`join_isomorphic_copies`], with copy `j` relabelled by seed
/// `seed + j`.
pub fn join_isomorphic_copies_seeded(
    g: &RegularGraph,
    spectrum: &Spectrum,
    k: usize,
    seed: u64,
) -> Result<JoinResult> {
    let n = g.n();
    let d = g.degree() as f64;
    if k == 0 {
        return Err(Error::Graph("need at least one copy".into()));
    }
    if spectrum.len() != n {
        return Err(Error::InvalidInput(format!(
            "spectrum has {} entries, graph has {n} vertices",
            spectrum.len()
        )));
    }
    let vals = spectrum.real_parts();
    if spectrum.max_imag() > 1e-9
        || (vals[0] - d).abs() > 1e-8
        || vals.windows(2).any(|w| w[1] > w[0] + 1e-9)
    {
        return Err(Error::InvalidInput(
            "spectrum must be real, descending and start with the degree".into(),
        ));
    }

    let mut parts = vec![g.clone()];
    for j in 1..k {
        parts.push(RegularGraph::new(permuted_copy(g.graph(), seed + j as u64))?);
    }
    let joined = join_graph(&parts, JoinKind::Full)?;

    let nk = n as f64;
    let kf = k as f64;
    let mut values = vec![Complex64::new(d + nk * (kf - 1.0), 0.0)];
    values.extend(std::iter::repeat_n(Complex64::new(d - nk, 0.0), k - 1));
    for _ in 0..k {
        values.extend(vals[1..].iter().map(|&x| Complex64::new(x, 0.0)));
    }
    let predicted = Spectrum::new(values)?;

    let mut small = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            small[(i, j)] = if i == j { d } else { nk };
        }
    }
    Ok(JoinResult {
        joined,
        energy: energy(&predicted),
        predicted,
        small,
        parts,
        kind: JoinKind::Full,
    })
}

/// Join along a path: part `j` fully connected to part `j + 1` only.
pub fn chain_join(parts: &[RegularGraph]) -> Result<JoinResult> {
    if parts.is_empty() {
        return Err(Error::Graph("join of no graphs".into()));
    }
    let couplings: Vec<f64> = parts
        .windows(2)
        .map(|w| ((w[0].n() * w[1].n()) as f64).sqrt())
        .collect();
    let sys = regular_block_system(parts, chain_rho(&couplings))?;
    finish(parts.to_vec(), JoinKind::Chain, chain(&sys)?)
}

/// `2 cos(j pi / (k + 1))` for `j = 1..k`, descending.
pub fn path_eigenvalues(k: usize) -> Vec<f64> {
    (1..=k)
        .map(|j| {
            let x = 2.0 * (j as f64 * PI / (k as f64 + 1.0)).cos();
            // the middle root of an odd path is exactly zero
            if 2 * j == k + 1 {
                0.0
            } else {
                x
            }
        })
        .collect()
}

/// Relabels vertex `i` as `perm[i]`, i.e. `P A P^T`.
pub fn permute(g: &Graph, perm: &[usize]) -> Result<Graph> {
    let n = g.n();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::Graph("not a permutation of the vertex set".into()));
    }
    let edges: Vec<_> = g.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(n, &edges)
}

pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

/// Isomorphic copy of `g` under a seeded random relabelling.
pub fn permuted_copy(g: &Graph, seed: u64) -> Graph {
    permute(g, &random_permutation(g.n(), seed)).expect("random_permutation yields a permutation")
}
