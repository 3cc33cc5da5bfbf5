//! Sampling `H(n, r, p)`, the co-occurrence adjacency matrix and its centered,
//! scaled version.
//!
//! Vertices are 0-based in memory and 1-based in the text format.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;
use crate::special::log_binomial;
use crate::theory::{derive_stats, ModelParams};

/// Largest class population for which the edge count is drawn from the exact binomial.
pub const EXACT_BINOMIAL_LIMIT: u64 = 1 << 53;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerBudget {
    pub max_edges: u64,
    /// Consecutive duplicate draws tolerated while collecting distinct subsets.
    pub max_rejections: u64,
}

impl Default for SamplerBudget {
    fn default() -> Self {
        Self { max_edges: 10_000_000, max_rejections: 10_000 }
    }
}

impl SamplerBudget {
    pub fn new(max_edges: u64, max_rejections: u64) -> Result<Self> {
        if max_edges == 0 || max_rejections == 0 {
            return Err(Error::InvalidParams("sampler budget limits must be positive".into()));
        }
        Ok(Self { max_edges, max_rejections })
    }

    /// Fails with [`Error::BudgetExceeded`] if the model's expected edge count is too large.
    pub fn check<T: Real>(&self, params: &ModelParams<T>) -> Result<()> {
        let log_expected = params.log_expected_edges().to_f64_lossy();
        if log_expected > (self.max_edges as f64).ln() {
            return Err(Error::BudgetExceeded { log_expected, max_edges: self.max_edges });
        }
        Ok(())
    }
}

/// How the number of present edges of a class was drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountLaw {
    Binomial,
    /// `Poisson(C(n, r) p)` substitute for populations above [`EXACT_BINOMIAL_LIMIT`].
    Poisson,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    size: usize,
    /// Edges back to back, `size` vertices each, ascending within an edge.
    flat: Vec<u32>,
    count_law: CountLaw,
}

impl EdgeClass {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.size
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = &[u32]> {
        self.flat.chunks_exact(self.size)
    }

    pub fn count_law(&self) -> CountLaw {
        self.count_law
    }
}

/// A realization: vertex count plus hyperedges grouped by size class, in the class
/// order of the generating parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    classes: Vec<EdgeClass>,
}

impl Hypergraph {
    /// Builds a hypergraph from explicit 0-based edge lists, validating every edge.
    pub fn from_edges(n: usize, classes: Vec<(usize, Vec<Vec<u32>>)>) -> Result<Self> {
        let mut out = Vec::with_capacity(classes.len());
        for (ci, (size, edges)) in classes.into_iter().enumerate() {
            if size < 2 || size > n {
                return Err(Error::InvalidParams(format!("class {ci}: size {size} outside [2, {n}]")));
            }
            let mut seen = HashSet::with_capacity(edges.len());
            let mut flat = Vec::with_capacity(edges.len() * size);
            for e in edges {
                if e.len() != size {
                    return Err(Error::InvalidParams(format!("class {ci}: edge of size {} in class of size {size}", e.len())));
                }
                if e.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidParams(format!("class {ci}: edge {e:?} is not strictly ascending")));
                }
                if e.last().is_some_and(|&v| v as usize >= n) {
                    return Err(Error::InvalidParams(format!("class {ci}: edge {e:?} has a vertex out of range")));
                }
                if !seen.insert(e.clone()) {
                    return Err(Error::InvalidParams(format!("class {ci}: duplicate edge {e:?}")));
                }
                flat.extend_from_slice(&e);
            }
            out.push(EdgeClass { size, flat, count_law: CountLaw::Binomial });
        }
        Ok(Self { n, classes: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    pub fn edge_count(&self) -> usize {
        self.classes.iter().map(EdgeClass::len).sum()
    }

    /// Writes the text format: `n k`, then per class `r m` and `m` edge lines of
    /// 1-based vertices.
    pub fn write_text(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.classes.len())?;
        let mut line = String::new();
        for class in &self.classes {
            writeln!(w, "{} {}", class.size, class.len())?;
            for e in class.edges() {
                line.clear();
                for (i, v) in e.iter().enumerate() {
                    if i > 0 {
                        line.push(' ');
                    }
                    line.push_str(&(v + 1).to_string());
                }
                line.push('\n');
                w.write_all(line.as_bytes())?;
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read_text(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(s) if s.trim().is_empty() => None,
            Ok(s) => Some(Ok((i + 1, s))),
            Err(e) => Some(Err(Error::Parse { line: i + 1, msg: e.to_string() })),
        });
        let mut next_numbers = |what: &str| -> Result<(usize, Vec<u64>)> {
            let (line, text) = lines
                .next()
                .ok_or_else(|| Error::Parse { line: 0, msg: format!("unexpected end of input, expected {what}") })??;
            let nums = text
                .split(' ')
                .map(|t| t.parse::<u64>().map_err(|e| Error::Parse { line, msg: format!("{what}: {e}") }))
                .collect::<Result<Vec<_>>>()?;
            Ok((line, nums))
        };
        let (line, head) = next_numbers("header `n k`")?;
        let [n, k] = head[..] else {
            return Err(Error::Parse { line, msg: "header must be `n k`".into() });
        };
        let n = usize::try_from(n).map_err(|_| Error::Parse { line, msg: "n too large".into() })?;
        let mut classes = Vec::new();
        for _ in 0..k {
            let (line, head) = next_numbers("class header `r m`")?;
            let [r, m] = head[..] else {
                return Err(Error::Parse { line, msg: "class header must be `r m`".into() });
            };
            let mut edges = Vec::with_capacity(m as usize);
            for _ in 0..m {
                let (line, e) = next_numbers("edge")?;
                if e.len() as u64 != r {
                    return Err(Error::Parse { line, msg: format!("expected {r} vertices, got {}", e.len()) });
                }
                let edge = e
                    .iter()
                    .map(|&v| {
                        if v == 0 || v as usize > n {
                            Err(Error::Parse { line, msg: format!("vertex {v} outside 1..={n}") })
                        } else {
                            Ok((v - 1) as u32)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                edges.push(edge);
            }
            classes.push((r as usize, edges));
        }
        if let Some(extra) = lines.next() {
            let (line, _) = extra?;
            return Err(Error::Parse { line, msg: "trailing content after last class".into() });
        }
        Self::from_edges(n, classes)
    }
}

/// Samples a realization with a ChaCha8 stream seeded from `seed`.
pub fn sample_hypergraph<T: Real>(params: &ModelParams<T>, seed: u64, budget: SamplerBudget) -> Result<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_hypergraph_with_rng(params, &mut rng, budget)
}

/// Per class: draw the number of present edges, then that many distinct uniform
/// subsets of the vertex set.
pub fn sample_hypergraph_with_rng<T: Real, R: Rng + ?Sized>(
    params: &ModelParams<T>,
    rng: &mut R,
    budget: SamplerBudget,
) -> Result<Hypergraph> {
    budget.check(params)?;
    let n = usize::try_from(params.n()).map_err(|_| Error::InvalidParams("n does not fit in memory".into()))?;
    if n > u32::MAX as usize {
        return Err(Error::InvalidParams(format!("n = {n} exceeds the u32 vertex range")));
    }
    let mut classes = Vec::with_capacity(params.k());
    for class in params.classes() {
        let r = class.size as usize;
        let p = class.prob.to_f64_lossy();
        let population = exact_binomial(params.n(), class.size);
        let (count, count_law) = match population {
            Some(c) if c <= EXACT_BINOMIAL_LIMIT => {
                let k = Binomial::new(c, p)
                    .map_err(|e| Error::InvalidParams(e.to_string()))?
                    .sample(rng);
                (k, CountLaw::Binomial)
            }
            _ => {
                let lambda = (log_binomial::<f64>(params.n(), class.size)? + p.ln()).exp();
                let k = if lambda > 0.0 {
                    Poisson::new(lambda).map_err(|e| Error::InvalidParams(e.to_string()))?.sample(rng) as u64
                } else {
                    0
                };
                (k, CountLaw::Poisson)
            }
        };
        let flat = match population {
            Some(c) if count > c / 2 && c <= budget.max_edges => enumerate_and_thin(n, r, c, count, rng),
            _ => draw_distinct(n, r, count, budget.max_rejections, rng)?,
        };
        classes.push(EdgeClass { size: r, flat, count_law });
    }
    Ok(Hypergraph { n, classes })
}

/// `C(n, k)` if it fits in a `u64`.
fn exact_binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * u128::from(n - j) / u128::from(j + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    u64::try_from(acc).ok()
}

/// Picks `count` of the `population = C(n, r)` subsets uniformly by index and walks
/// the lexicographic enumeration.
fn enumerate_and_thin<R: Rng + ?Sized>(n: usize, r: usize, population: u64, count: u64, rng: &mut R) -> Vec<u32> {
    let mut picks = index::sample(rng, population as usize, count as usize).into_vec();
    picks.sort_unstable();
    let mut flat = Vec::with_capacity(count as usize * r);
    let mut comb: Vec<u32> = (0..r as u32).collect();
    let mut rank = 0usize;
    for target in picks {
        while rank < target {
            next_combination(&mut comb, n as u32);
            rank += 1;
        }
        flat.extend_from_slice(&comb);
    }
    flat
}

fn next_combination(comb: &mut [u32], n: u32) {
    let r = comb.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if comb[i] < n - (r - i) as u32 {
            comb[i] += 1;
            for j in i + 1..r {
                comb[j] = comb[j - 1] + 1;
            }
            return;
        }
    }
}

/// Membership set for sorted subsets; packs them into a `u128` when they fit.
enum SeenSubsets {
    Packed { bits: u32, set: HashSet<u128> },
    Wide(HashSet<Box<[u32]>>),
}

impl SeenSubsets {
    fn new(n: usize, r: usize, capacity: usize) -> Self {
        let bits = usize::BITS - n.leading_zeros();
        if bits as usize * r <= 128 {
            SeenSubsets::Packed { bits, set: HashSet::with_capacity(capacity) }
        } else {
            SeenSubsets::Wide(HashSet::with_capacity(capacity))
        }
    }

    fn insert(&mut self, subset: &[u32]) -> bool {
        match self {
            SeenSubsets::Packed { bits, set } => {
                let key = subset.iter().fold(0u128, |acc, &v| (acc << *bits) | u128::from(v));
                set.insert(key)
            }
            SeenSubsets::Wide(set) => set.insert(subset.into()),
        }
    }
}

fn draw_distinct<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    count: u64,
    max_rejections: u64,
    rng: &mut R,
) -> Result<Vec<u32>> {
    let count = count as usize;
    let mut flat = Vec::with_capacity(count * r);
    let mut seen = SeenSubsets::new(n, r, count);
    let mut subset = Vec::with_capacity(r);
    let mut rejections = 0u64;
    while flat.len() < count * r {
        draw_subset(rng, n, r, &mut subset);
        if seen.insert(&subset) {
            flat.extend_from_slice(&subset);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections > max_rejections {
                return Err(Error::RejectionLimit(max_rejections));
            }
        }
    }
    Ok(flat)
}

/// Uniform `r`-subset of `0..n`, sorted ascending into `out`.
fn draw_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize, out: &mut Vec<u32>) {
    out.clear();
    if r <= 32 {
        // Floyd's algorithm with a linear membership scan.
        for j in (n - r)..n {
            let t = rng.random_range(0..=j) as u32;
            if out.contains(&t) {
                out.push(j as u32);
            } else {
                out.push(t);
            }
        }
    } else {
        out.extend(index::sample(rng, n, r).into_iter().map(|v| v as u32));
    }
    out.sort_unstable();
}

/// `A_uv` = number of hyperedges containing both `u` and `v`; zero diagonal.
pub fn adjacency(h: &Hypergraph) -> Result<DenseMatrix<u32>> {
    let n = h.n();
    let mut a = DenseMatrix::<u32>::zeros(n);
    for class in h.classes() {
        for e in class.edges() {
            for (i, &u) in e.iter().enumerate() {
                for &v in &e[i + 1..] {
                    let (u, v) = (u as usize, v as usize);
                    let val = a.get(u, v).checked_add(1).ok_or(Error::CountOverflow(u, v))?;
                    a.set_sym(u, v, val);
                }
            }
        }
    }
    Ok(a)
}

/// `H_n = (A - E[A]) / sqrt(n σ²)`: off-diagonal entries `(A_uv - μ)/sqrt(nσ²)`,
/// diagonal exactly zero.
pub fn center_scale<T: Real>(a: &DenseMatrix<u32>, params: &ModelParams<T>) -> Result<DenseMatrix<T>> {
    let stats = derive_stats(params)?;
    if a.n() as u64 != params.n() {
        return Err(Error::InvalidParams(format!(
            "adjacency is {}x{} but n = {}",
            a.n(),
            a.n(),
            params.n()
        )));
    }
    let (mu, sigma_sq) = match (stats.mu, stats.sigma_sq) {
        (Some(m), Some(s)) => (m, s),
        _ => {
            return Err(Error::Domain("entry mean or variance overflows; use the Gaussian surrogate".into()))
        }
    };
    let scale = (T::from_count(params.n()) * sigma_sq).sqrt().recip();
    Ok(DenseMatrix::from_fn(a.n(), |i, j| {
        if i == j {
            T::zero()
        } else {
            (T::from_count(u64::from(a.get(i, j))) - mu) * scale
        }
    }))
}

/// Number of edges of each class containing vertex `v` (1-based).
pub fn degree_count(h: &Hypergraph, v: usize) -> Result<Vec<u64>> {
    if v == 0 || v > h.n() {
        return Err(Error::Domain(format!("vertex {v} outside 1..={}", h.n())));
    }
    let target = (v - 1) as u32;
    Ok(h.classes()
        .iter()
        .map(|c| c.edges().filter(|e| e.binary_search(&target).is_ok()).count() as u64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u64, r: &[u64], p: &[f64]) -> ModelParams<f64> {
        ModelParams::from_slices(n, r, p).unwrap()
    }

    #[test]
    fn complete_graph_sample() {
        let h = sample_hypergraph(&params(5, &[2], &[1.0]), 7, SamplerBudget::default()).unwrap();
        assert_eq!(h.edge_count(), 10);
        let a = adjacency(&h).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(a.get(i, j), u32::from(i != j));
            }
        }
        for v in 1..=5 {
            assert_eq!(degree_count(&h, v).unwrap(), vec![4]);
        }
    }

    #[test]
    fn zero_probability_class_is_empty() {
        let h = sample_hypergraph(&params(20, &[2, 3], &[0.0, 0.2]), 1, SamplerBudget::default()).unwrap();
        assert!(h.classes()[0].is_empty());
        assert!(!h.classes()[1].is_empty());
        assert_eq!(degree_count(&h, 3).unwrap()[0], 0);
    }

    #[test]
    fn deterministic_in_seed() {
        let p = params(40, &[2, 3, 5], &[0.3, 0.05, 0.001]);
        let a = sample_hypergraph(&p, 99, SamplerBudget::default()).unwrap();
        let b = sample_hypergraph(&p, 99, SamplerBudget::default()).unwrap();
        let c = sample_hypergraph(&p, 100, SamplerBudget::default()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn edges_are_canonical_and_distinct() {
        let p = params(12, &[3, 4, 12], &[0.6, 0.2, 1.0]);
        let h = sample_hypergraph(&p, 3, SamplerBudget::default()).unwrap();
        for class in h.classes() {
            let mut seen = HashSet::new();
            for e in class.edges() {
                assert_eq!(e.len(), class.size());
                assert!(e.windows(2).all(|w| w[0] < w[1]));
                assert!(e.iter().all(|&v| (v as usize) < 12));
                assert!(seen.insert(e.to_vec()));
            }
        }
        // near-complete class goes through enumerate-and-thin
        assert_eq!(h.classes()[2].len(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let p = params(2000, &[600], &[0.3]);
        let err = sample_hypergraph(&p, 0, SamplerBudget::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn poisson_path_for_huge_populations() {
        // C(200, 30) ~ 4e35 > 2^53; p tiny keeps ~50 edges expected.
        let lc = log_binomial::<f64>(200, 30).unwrap();
        let p = (50f64.ln() - lc).exp();
        let h = sample_hypergraph(&params(200, &[30], &[p]), 5, SamplerBudget::default()).unwrap();
        assert_eq!(h.classes()[0].count_law(), CountLaw::Poisson);
        assert!(h.edge_count() > 10 && h.edge_count() < 120);
    }

    #[test]
    fn wide_subsets_fall_back_to_vec_keys() {
        // 70 · 7 bits > 128, so the packed key cannot be used.
        let lc = log_binomial::<f64>(100, 70).unwrap();
        let p = (20f64.ln() - lc).exp();
        let h = sample_hypergraph(&params(100, &[70], &[p]), 11, SamplerBudget::default()).unwrap();
        let mut seen = HashSet::new();
        for e in h.classes()[0].edges() {
            assert!(seen.insert(e.to_vec()));
        }
    }

    #[test]
    fn adjacency_examples() {
        let h = Hypergraph::from_edges(4, vec![(3, vec![vec![0, 1, 2]])]).unwrap();
        let a = adjacency(&h).unwrap();
        assert_eq!((a.get(0, 1), a.get(0, 2), a.get(1, 2), a.get(0, 3)), (1, 1, 1, 0));

        let h = Hypergraph::from_edges(3, vec![(2, vec![vec![0, 1]]), (3, vec![vec![0, 1, 2]])]).unwrap();
        let a = adjacency(&h).unwrap();
        assert_eq!((a.get(0, 1), a.get(0, 2), a.get(1, 2)), (2, 1, 1));
        assert_eq!(a.get(1, 0), 2);

        let empty = Hypergraph::from_edges(4, vec![(2, vec![])]).unwrap();
        assert!(adjacency(&empty).unwrap().as_slice().iter().all(|&x| x == 0));
    }

    #[test]
    fn center_scale_examples() {
        let p = params(3, &[2], &[0.5]);
        let complete = Hypergraph::from_edges(3, vec![(2, vec![vec![0, 1], vec![0, 2], vec![1, 2]])]).unwrap();
        let h = center_scale(&adjacency(&complete).unwrap(), &p).unwrap();
        let want = 0.5 / (0.75_f64).sqrt();
        for i in 0..3 {
            assert_eq!(h.get(i, i), 0.0);
            for j in 0..3 {
                if i != j {
                    assert!((h.get(i, j) - want).abs() < 1e-15);
                }
            }
        }
        // μ = 2 for n = 5, r = (2, 3), p = 1/2: an all-μ matrix centers to zero.
        let p = params(5, &[2, 3], &[0.5, 0.5]);
        let a = DenseMatrix::from_fn(5, |i, j| if i == j { 0 } else { 2 });
        assert!(center_scale(&a, &p).unwrap().as_slice().iter().all(|&x| x == 0.0));

        let degenerate = params(3, &[2], &[1.0]);
        assert_eq!(center_scale(&adjacency(&complete).unwrap(), &degenerate), Err(Error::Degenerate));
    }

    #[test]
    fn degree_out_of_range() {
        let h = Hypergraph::from_edges(4, vec![(2, vec![])]).unwrap();
        assert!(degree_count(&h, 0).is_err());
        assert!(degree_count(&h, 5).is_err());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let p = params(9, &[2, 3], &[0.4, 0.1]);
        let h = sample_hypergraph(&p, 4, SamplerBudget::default()).unwrap();
        let text = h.to_text();
        assert!(text.starts_with("9 2\n2 "));
        let back = Hypergraph::read_text(text.as_bytes()).unwrap();
        assert_eq!(back.to_text(), text);

        let bad = ["3 1\n2 1\n1 4\n", "3 1\n2 1\n2 1\n", "3 1\n2 2\n1 2\n1 2\n", "3 1\n2 1\n", "3 x\n"];
        for b in bad {
            assert!(Hypergraph::read_text(b.as_bytes()).is_err(), "{b:?}");
        }
    }

    #[test]
    fn from_edges_validation() {
        assert!(Hypergraph::from_edges(3, vec![(2, vec![vec![1, 0]])]).is_err());
        assert!(Hypergraph::from_edges(3, vec![(2, vec![vec![0, 1, 2]])]).is_err());
        assert!(Hypergraph::from_edges(3, vec![(4, vec![])]).is_err());
    }

    #[test]
    fn next_combination_enumerates_lexicographically() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        for _ in 0..5 {
            next_combination(&mut c, 4);
            all.push(c.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
