use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

/// Vertex paths rooted at `o`, grouped by family and length.
///
/// * `gamma_a[k - 1]`: length-`k` paths whose first `k` vertices are
///   distinct and outside `A` and whose last vertex lies in `A`.
/// * `gamma_a_star[k - 3]`: length-`k` paths (`k >= 3`) whose first `k`
///   vertices are distinct and outside `A` and whose last vertex repeats an
///   earlier one.
/// * `gamma_0`: all `(o, u, o, v)` with `u`, `v` neighbors of `o`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathFamily {
    pub root: usize,
    pub avoid: VertexSet,
    pub max_len: usize,
    pub gamma_a: Vec<Vec<Vec<usize>>>,
    pub gamma_a_star: Vec<Vec<Vec<usize>>>,
    pub gamma_0: Vec<Vec<usize>>,
    /// Largest degree among the graph's vertices, for the tail diagnostic.
    pub max_degree: usize,
}

impl PathFamily {
    pub fn gamma_a_len(&self, k: usize) -> usize {
        k.checked_sub(1).and_then(|i| self.gamma_a.get(i)).map_or(0, Vec::len)
    }

    pub fn gamma_a_star_len(&self, k: usize) -> usize {
        k.checked_sub(3).and_then(|i| self.gamma_a_star.get(i)).map_or(0, Vec::len)
    }
}

/// Depth-first enumeration of the families up to `max_len`. The number of
/// visited search nodes is capped by `node_budget`.
pub fn enumerate_path_families(
    g: &Graph,
    root: usize,
    avoid: &VertexSet,
    max_len: usize,
    node_budget: usize,
) -> Result<PathFamily> {
    if root >= g.vertex_count() {
        return Err(Error::domain(format!("root {root} outside the graph")));
    }
    if avoid.contains(root) {
        return Err(Error::domain("root must not lie in the avoided set"));
    }
    if max_len == 0 {
        return Err(Error::domain("max_len must be >= 1"));
    }
    let mut fam = PathFamily {
        root,
        avoid: avoid.clone(),
        max_len,
        gamma_a: vec![Vec::new(); max_len],
        gamma_a_star: vec![Vec::new(); max_len.saturating_sub(2)],
        gamma_0: Vec::new(),
        max_degree: g.max_degree(),
    };
    let mut on_path = vec![false; g.vertex_count()];
    let mut path = vec![root];
    on_path[root] = true;
    let mut nodes = 0usize;
    extend(g, &mut path, &mut on_path, &mut fam, &mut nodes, node_budget)?;

    let around = g.neighbors(root);
    if around.len().saturating_mul(around.len()) > node_budget {
        return Err(Error::capacity("path enumeration exceeded its node budget"));
    }
    for &u in around {
        for &v in around {
            fam.gamma_0.push(vec![root, u as usize, root, v as usize]);
        }
    }
    Ok(fam)
}

/// `path` holds distinct vertices outside `A`; try every next step.
fn extend(
    g: &Graph,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    fam: &mut PathFamily,
    nodes: &mut usize,
    budget: usize,
) -> Result<()> {
    let k = path.len(); // length of the extended path
    if k > fam.max_len {
        return Ok(());
    }
    let last = *path.last().expect("nonempty path");
    for &w in g.neighbors(last) {
        let w = w as usize;
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::capacity("path enumeration exceeded its node budget"));
        }
        if fam.avoid.contains(w) {
            let mut p = path.clone();
            p.push(w);
            fam.gamma_a[k - 1].push(p);
        } else if on_path[w] {
            if k >= 3 {
                let mut p = path.clone();
                p.push(w);
                fam.gamma_a_star[k - 3].push(p);
            }
        } else {
            path.push(w);
            on_path[w] = true;
            extend(g, path, on_path, fam, nodes, budget)?;
            on_path[w] = false;
            path.pop();
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathWeights {
    pub gamma_a: f64,
    pub gamma_a_star: f64,
    pub gamma_0: f64,
    /// `gamma_a + gamma_a_star`, the sum entering the survival bound.
    pub total: f64,
    /// `(2 lambda)^{max_len + 1} / (1 - 2 lambda maxdeg)` when the ratio is
    /// below 1: a bound on the weight of longer paths that were cut off.
    pub truncation_tail: Option<f64>,
}

/// Sum of `(2 lambda)^{|gamma|}` over each family.
pub fn path_weight_sum(fam: &PathFamily, lambda: f64) -> Result<PathWeights> {
    if !(lambda > 0.0 && lambda < 0.5) {
        return Err(Error::domain(format!("lambda must lie in (0, 1/2), got {lambda}")));
    }
    let w = 2.0 * lambda;
    let by_len = |lists: &[Vec<Vec<usize>>]| -> f64 {
        // + 0.0 turns the empty sum's -0.0 into 0.0
        lists.iter().flatten().map(|p| w.powi(p.len() as i32 - 1)).sum::<f64>() + 0.0
    };
    let gamma_a = by_len(&fam.gamma_a);
    let gamma_a_star = by_len(&fam.gamma_a_star);
    let gamma_0 = fam.gamma_0.len() as f64 * w.powi(3);
    let ratio = w * fam.max_degree as f64;
    let truncation_tail = (ratio < 1.0).then(|| w.powi(fam.max_len as i32 + 1) / (1.0 - ratio));
    Ok(PathWeights { gamma_a, gamma_a_star, gamma_0, total: gamma_a + gamma_a_star, truncation_tail })
}
