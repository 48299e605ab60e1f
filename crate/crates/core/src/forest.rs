//! Brute-force enumeration of labeled trees and colored rooted forests.
//!
//! Nothing here uses a counting formula to produce a count: forests come
//! from walking every parent function `[n] -> [n] + {ROOT}` and keeping the
//! acyclic ones, trees from walking every `(n-1)`-edge subset of the
//! complete graph and keeping the connected ones. Colorings are enumerated
//! explicitly. The closed forms are computed separately for comparison.
//!
//! Edge colors live on the child endpoint, so "edges colored with `p`
//! colors" and "non-root vertices colored with `p` colors" are the same
//! object.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::UnionFind;

/// Enumeration limits. Forests with colors grow like `n^n * colors^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub plain_trees: usize,
    pub plain_forests: usize,
    pub colored: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { plain_trees: 7, plain_forests: 6, colored: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestSpec {
    pub n: usize,
    pub edge_colors: u32,
    /// `1` means roots are uncolored.
    pub root_colors: u32,
}

impl ForestSpec {
    pub fn new(n: usize, edge_colors: u32, root_colors: u32) -> Result<Self> {
        if n == 0 || edge_colors == 0 || root_colors == 0 {
            return Err(Error::InvalidParameter(format!(
                "forest spec needs n, edge_colors, root_colors >= 1, got ({n}, {edge_colors}, {root_colors})"
            )));
        }
        Ok(ForestSpec { n, edge_colors, root_colors })
    }

    /// `q (q + n p)^(n-1)`, which is `(n+1)^(n-1)` at `p = q = 1` and
    /// `(m n + 1)^(n-1)` at `q = 1`.
    pub fn closed_form(&self) -> u64 {
        let p = self.edge_colors as u64;
        let q = self.root_colors as u64;
        q * (q + self.n as u64 * p).pow(self.n as u32 - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredForest {
    /// `None` marks a root.
    pub parent: Vec<Option<usize>>,
    /// Color of the edge to the parent; `None` exactly at roots.
    pub edge_color: Vec<Option<u32>>,
    /// `None` exactly at non-roots.
    pub root_color: Vec<Option<u32>>,
}

impl ColoredForest {
    pub fn is_acyclic(&self) -> bool {
        is_acyclic(&self.parent)
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        self.parent.iter().enumerate().filter(|(_, p)| p.is_none()).map(|(v, _)| v)
    }

    /// Root of the tree that contains `v`.
    pub fn root_of(&self, mut v: usize) -> usize {
        while let Some(p) = self.parent[v] {
            v = p;
        }
        v
    }
}

/// Brute-force count next to the closed form it is meant to confirm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCount {
    pub observed: u64,
    pub closed_form: u64,
}

impl EnumerationCount {
    pub fn matches(&self) -> bool {
        self.observed == self.closed_form
    }
}

fn is_acyclic(parent: &[Option<usize>]) -> bool {
    let n = parent.len();
    (0..n).all(|start| {
        let mut v = start;
        for _ in 0..=n {
            match parent[v] {
                None => return true,
                Some(p) => v = p,
            }
        }
        false
    })
}

/// Visits every mixed-radix tuple `t` with `t[i] < radices[i]`.
fn for_each_tuple(radices: &[u32], mut visit: impl FnMut(&[u32])) {
    if radices.contains(&0) {
        return;
    }
    let mut t = vec![0u32; radices.len()];
    loop {
        visit(&t);
        let mut i = 0;
        loop {
            if i == t.len() {
                return;
            }
            t[i] += 1;
            if t[i] < radices[i] {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// Every acyclic parent function on `n` vertices, i.e. every rooted forest
/// on `[n]`.
pub fn rooted_forest_shapes(n: usize) -> Vec<Vec<Option<usize>>> {
    // Choice 0 at vertex v means "root"; 1..n index the other n - 1 vertices.
    let radices = vec![n as u32; n];
    let mut out = Vec::new();
    for_each_tuple(&radices, |choice| {
        let parent: Vec<Option<usize>> = choice
            .iter()
            .enumerate()
            .map(|(v, &c)| {
                let c = c as usize;
                if c == 0 {
                    None
                } else if c - 1 < v {
                    Some(c - 1)
                } else {
                    Some(c)
                }
            })
            .collect();
        if is_acyclic(&parent) {
            out.push(parent);
        }
    });
    out
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

/// Visits every colored rooted forest matching `spec`, without a cap check.
pub fn for_each_colored_forest(spec: ForestSpec, mut visit: impl FnMut(&ColoredForest)) {
    for parent in rooted_forest_shapes(spec.n) {
        let radices: Vec<u32> =
            parent.iter().map(|p| if p.is_some() { spec.edge_colors } else { spec.root_colors }).collect();
        for_each_tuple(&radices, |colors| {
            let forest = ColoredForest {
                parent: parent.clone(),
                edge_color: parent.iter().zip(colors).map(|(p, &c)| p.map(|_| c)).collect(),
                root_color: parent.iter().zip(colors).map(|(p, &c)| p.is_none().then_some(c)).collect(),
            };
            visit(&forest);
        });
    }
}

/// Visits every spanning tree of the complete graph on `n` vertices as an
/// edge list.
pub fn for_each_labeled_tree(n: usize, mut visit: impl FnMut(&[(usize, usize)])) {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    let k = n.saturating_sub(1);
    let mut idx: Vec<usize> = (0..k).collect();
    let mut chosen = Vec::with_capacity(k);
    loop {
        chosen.clear();
        chosen.extend(idx.iter().map(|&i| edges[i]));
        let mut uf = UnionFind::new(n);
        for &(a, b) in &chosen {
            uf.union(a, b);
        }
        if n == 0 || uf.size_of(0) == n {
            visit(&chosen);
        }
        // Next k-combination of edge indices.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < edges.len() - k + i {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn count_labeled_trees(n: usize) -> Result<EnumerationCount> {
    count_labeled_trees_with_cap(n, Caps::default().plain_trees)
}

pub fn count_labeled_trees_with_cap(n: usize, cap: usize) -> Result<EnumerationCount> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    check_cap(n, cap)?;
    let mut observed = 0u64;
    for_each_labeled_tree(n, |_| observed += 1);
    let closed_form = if n == 1 { 1 } else { (n as u64).pow(n as u32 - 2) };
    Ok(EnumerationCount { observed, closed_form })
}

pub fn count_rooted_forests(spec: ForestSpec) -> Result<EnumerationCount> {
    count_rooted_forests_with_caps(spec, Caps::default())
}

pub fn count_rooted_forests_with_caps(spec: ForestSpec, caps: Caps) -> Result<EnumerationCount> {
    let cap = if spec.edge_colors > 1 || spec.root_colors > 1 { caps.colored } else { caps.plain_forests };
    check_cap(spec.n, cap)?;
    let mut observed = 0u64;
    for_each_colored_forest(spec, |_| observed += 1);
    Ok(EnumerationCount { observed, closed_form: spec.closed_form() })
}

/// Edge-colored labeled trees on `{0, ..., n}` with the tally obtained by
/// cutting at vertex 0: the children of 0 become roots, grouped by the color
/// of their edge to 0, giving one rooted `m`-forest per color. The tally is
/// keyed by the block sizes `(k_1, ..., k_m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedAtZero {
    pub count: EnumerationCount,
    pub by_block_sizes: BTreeMap<Vec<usize>, u64>,
}

pub fn count_colored_trees_rooted_at_zero(n: usize, m: u32) -> Result<RootedAtZero> {
    count_colored_trees_rooted_at_zero_with_cap(n, m, Caps::default().colored)
}

pub fn count_colored_trees_rooted_at_zero_with_cap(n: usize, m: u32, cap: usize) -> Result<RootedAtZero> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("n and m must be at least 1".into()));
    }
    check_cap(n + 1, cap)?;
    let vertices = n + 1;
    let mut observed = 0u64;
    let mut by_block_sizes = BTreeMap::new();
    for_each_labeled_tree(vertices, |edges| {
        let parent = orient_from_zero(vertices, edges);
        // top[v] = the child of 0 above v.
        let top: Vec<usize> = (0..vertices)
            .map(|v| {
                let mut u = v;
                while let Some(p) = parent[u] {
                    if p == 0 {
                        return u;
                    }
                    u = p;
                }
                0
            })
            .collect();
        for_each_tuple(&vec![m; n], |colors| {
            // colors[v - 1] colors the edge from v to its parent.
            observed += 1;
            let mut sizes = vec![0usize; m as usize];
            for v in 1..vertices {
                sizes[colors[top[v] - 1] as usize] += 1;
            }
            *by_block_sizes.entry(sizes).or_insert(0) += 1;
        });
    });
    let closed_form = (n as u64 + 1).pow(n as u32 - 1) * (m as u64).pow(n as u32);
    Ok(RootedAtZero { count: EnumerationCount { observed, closed_form }, by_block_sizes })
}

fn orient_from_zero(vertices: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![None; vertices];
    let mut seen = vec![false; vertices];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                stack.push(w);
            }
        }
    }
    parent
}

/// Tallies of the doubly colored set used for the `(p, q)` identity: rooted
/// forests on `[n]` where each vertex carries a color in `0..p` and each
/// root additionally a color in `0..q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootColorTally {
    pub total: u64,
    /// Keyed by `(j_1, ..., j_p)`: vertices in trees whose root has `p`-color `t`.
    pub by_first_color: BTreeMap<Vec<usize>, u64>,
    /// Keyed by `(i_1, ..., i_q)`: vertices in trees whose root has `q`-color `t`.
    pub by_second_color: BTreeMap<Vec<usize>, u64>,
}

pub fn group_by_root_color(n: usize, p: u32, q: u32) -> Result<RootColorTally> {
    group_by_root_color_with_cap(n, p, q, Caps::default().colored)
}

pub fn group_by_root_color_with_cap(n: usize, p: u32, q: u32, cap: usize) -> Result<RootColorTally> {
    if n == 0 || p == 0 || q == 0 {
        return Err(Error::InvalidParameter("n, p, q must be at least 1".into()));
    }
    check_cap(n, cap)?;
    let mut tally = RootColorTally { total: 0, by_first_color: BTreeMap::new(), by_second_color: BTreeMap::new() };
    // A (p, q) ForestSpec colors non-roots with p and roots with q; the extra
    // p-color on roots is enumerated on top.
    let spec = ForestSpec::new(n, p, q)?;
    for_each_colored_forest(spec, |forest| {
        let roots: Vec<usize> = forest.roots().collect();
        let owner: Vec<usize> = (0..n).map(|v| forest.root_of(v)).collect();
        for_each_tuple(&vec![p; roots.len()], |first| {
            tally.total += 1;
            let mut first_sizes = vec![0usize; p as usize];
            let mut second_sizes = vec![0usize; q as usize];
            for &r in &owner {
                let slot = roots.iter().position(|&x| x == r).expect("owner is a root");
                first_sizes[first[slot] as usize] += 1;
                second_sizes[forest.root_color[r].expect("root has a color") as usize] += 1;
            }
            *tally.by_first_color.entry(first_sizes).or_insert(0) += 1;
            *tally.by_second_color.entry(second_sizes).or_insert(0) += 1;
        });
    });
    Ok(tally)
}
