//! Uniform random `r`-uniform hypergraphs with a fixed number of edges, and
//! their connected components.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::trial_rng;
use crate::series::eval_f;

/// Disjoint sets with union by size and path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut v = v;
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }

    /// Returns the root of the merged set.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        a
    }

    pub fn size_of(&mut self, v: usize) -> usize {
        let r = self.find(v);
        self.size[r]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergraphConfig {
    pub n: usize,
    pub r: usize,
    pub f_edges: usize,
    pub c: f64,
    pub seed: u64,
}

impl HypergraphConfig {
    /// Edge count `round(c n / (r (r - 1)))`, so `c = 1` is the threshold.
    pub fn from_degree(n: usize, r: usize, c: f64, seed: u64) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameter(format!("uniformity r must be at least 2, got {r}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
        }
        let f_edges = (c * n as f64 / (r * (r - 1)) as f64).round() as usize;
        let cfg = HypergraphConfig { n, r, f_edges, c, seed };
        cfg.check_feasible()?;
        Ok(cfg)
    }

    fn check_feasible(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::InvalidParameter(format!("uniformity r must be at least 2, got {}", self.r)));
        }
        if (self.f_edges as u128) > binomial(self.n, self.r) {
            return Err(Error::InfeasibleEdgeCount { n: self.n, r: self.r, f_edges: self.f_edges });
        }
        Ok(())
    }
}

/// `binomial(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

const ENUMERATE_LIMIT: u128 = 2_000_000;

fn all_subsets(n: usize, r: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut idx: Vec<u32> = (0..r as u32).collect();
    loop {
        out.push(idx.clone());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (idx[i] as usize) < n - r + i {
                idx[i] += 1;
                for j in (i + 1)..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `f_edges` distinct `r`-subsets of `0..n`, uniform over all such sets.
/// Each edge is a sorted vertex list.
pub fn generate(cfg: &HypergraphConfig, rng: &mut impl Rng) -> Result<Vec<Vec<u32>>> {
    cfg.check_feasible()?;
    let total = binomial(cfg.n, cfg.r);
    if cfg.f_edges == 0 {
        return Ok(Vec::new());
    }
    if total <= ENUMERATE_LIMIT && (cfg.f_edges as u128) * 4 > total {
        let subsets = all_subsets(cfg.n, cfg.r);
        let picks = index::sample(rng, subsets.len(), cfg.f_edges);
        return Ok(picks.into_iter().map(|i| subsets[i].clone()).collect());
    }
    let mut seen = HashSet::with_capacity(cfg.f_edges);
    let mut edges = Vec::with_capacity(cfg.f_edges);
    while edges.len() < cfg.f_edges {
        let mut e: Vec<u32> = index::sample(rng, cfg.n, cfg.r).into_iter().map(|v| v as u32).collect();
        e.sort_unstable();
        if seen.insert(e.clone()) {
            edges.push(e);
        }
    }
    Ok(edges)
}

/// Draws the hypergraph of trial `trial` for `cfg.seed`.
pub fn generate_trial(cfg: &HypergraphConfig, trial: u64) -> Result<Vec<Vec<u32>>> {
    generate(cfg, &mut trial_rng(cfg.seed, trial))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentStats {
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
    pub largest: usize,
    pub second_largest: usize,
    pub giant_fraction: f64,
}

/// Components of the hypergraph on `0..n` where every edge joins all of its
/// vertices. Edges of mixed arity are accepted.
pub fn component_stats<E: AsRef<[u32]>>(n: usize, edges: &[E]) -> Result<ComponentStats> {
    let mut uf = UnionFind::new(n);
    for e in edges {
        let e = e.as_ref();
        for &v in e {
            if v as usize >= n {
                return Err(Error::VertexOutOfRange { vertex: v as usize, n });
            }
        }
        if let Some((&first, rest)) = e.split_first() {
            for &v in rest {
                uf.union(first as usize, v as usize);
            }
        }
    }
    let mut sizes = Vec::new();
    for v in 0..n {
        if uf.find(v) == v {
            sizes.push(uf.size_of(v));
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let largest = sizes.first().copied().unwrap_or(0);
    let second_largest = sizes.get(1).copied().unwrap_or(0);
    let giant_fraction = if n == 0 { 0.0 } else { largest as f64 / n as f64 };
    Ok(ComponentStats { sizes, largest, second_largest, giant_fraction })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GiantComparison {
    /// Per-trial largest-component fractions, in trial order.
    pub fractions: Vec<f64>,
    pub mean_fraction: f64,
    /// `1 - f(r - 1, c)`.
    pub theory: f64,
    pub deviation: f64,
}

/// `1 - f(r - 1, c)`, zero at and below the threshold.
pub fn giant_theory(r: usize, c: f64) -> Result<f64> {
    if c <= 1.0 {
        return Ok(0.0);
    }
    Ok(1.0 - eval_f((r - 1) as f64, c, 1e-12)?)
}

pub fn giant_vs_theory(cfg: &HypergraphConfig, trials: usize) -> Result<GiantComparison> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let fractions = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let edges = generate_trial(cfg, t)?;
            Ok(component_stats(cfg.n, &edges)?.giant_fraction)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean_fraction = fractions.iter().sum::<f64>() / trials as f64;
    let theory = giant_theory(cfg.r, cfg.c)?;
    Ok(GiantComparison { deviation: (mean_fraction - theory).abs(), fractions, mean_fraction, theory })
}
