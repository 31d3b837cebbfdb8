use nalgebra::{DMatrix, DVector};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_STATE_CAP: usize = 12;

const TRUNCATION: f64 = 1e-10;

/// The full state space `{0,1}^V` of the contact process on a small graph,
/// states encoded as bitmasks.
#[derive(Clone, Debug)]
pub struct StateSpace {
    n: usize,
    lambda: f64,
    neighbor_masks: Vec<u32>,
}

impl StateSpace {
    pub fn new(g: &Graph, lambda: f64) -> Result<Self> {
        Self::with_cap(g, lambda, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(g: &Graph, lambda: f64, cap: usize) -> Result<Self> {
        let n = g.vertex_count();
        if n > cap || n > 24 {
            return Err(Error::capacity(format!("{n} vertices exceed the state cap {cap}")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::domain(format!("infection rate must be >= 0, got {lambda}")));
        }
        let neighbor_masks = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
        Ok(Self { n, lambda, neighbor_masks })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn state_count(&self) -> usize {
        1 << self.n
    }

    pub fn mask(&self, set: &VertexSet) -> Result<u32> {
        set.iter().try_fold(0u32, |m, v| {
            if v < self.n {
                Ok(m | 1 << v)
            } else {
                Err(Error::domain(format!("vertex {v} outside the graph")))
            }
        })
    }

    /// Calls `f(target, rate)` for every transition out of `s`.
    #[inline]
    pub fn for_each_transition(&self, s: u32, mut f: impl FnMut(u32, f64)) {
        for v in 0..self.n {
            let bit = 1u32 << v;
            if s & bit != 0 {
                f(s & !bit, 1.0);
            } else {
                let k = (self.neighbor_masks[v] & s).count_ones();
                if k > 0 && self.lambda > 0.0 {
                    f(s | bit, self.lambda * k as f64);
                }
            }
        }
    }

    pub fn exit_rate(&self, s: u32) -> f64 {
        let mut total = 0.0;
        self.for_each_transition(s, |_, r| total += r);
        total
    }

    /// Transient distribution at time `t` from the point mass on `initial`,
    /// by uniformization. Poisson weights are computed in log space and the
    /// series stops once the neglected weight is below `1e-10`.
    pub fn transient(&self, initial: u32, t: f64) -> Result<Vec<f64>> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
        }
        let size = self.state_count();
        let mut v = vec![0.0; size];
        v[initial as usize] = 1.0;
        let q = (0..size as u32).map(|s| self.exit_rate(s)).fold(0.0, f64::max);
        if q == 0.0 || t == 0.0 {
            return Ok(v);
        }
        let qt = q * t;
        let mut out = vec![0.0; size];
        let mut next = vec![0.0; size];
        let mut accumulated = 0.0;
        let mut k = 0u64;
        loop {
            let w = (-qt + k as f64 * qt.ln() - ln_gamma(k as f64 + 1.0)).exp();
            for (o, x) in out.iter_mut().zip(&v) {
                *o += w * x;
            }
            accumulated += w;
            if 1.0 - accumulated < TRUNCATION && k as f64 > qt {
                break;
            }
            next.iter_mut().for_each(|x| *x = 0.0);
            for s in 0..size as u32 {
                let p = v[s as usize];
                if p == 0.0 {
                    continue;
                }
                let mut stay = 1.0;
                self.for_each_transition(s, |target, r| {
                    next[target as usize] += p * r / q;
                    stay -= r / q;
                });
                next[s as usize] += p * stay;
            }
            std::mem::swap(&mut v, &mut next);
            k += 1;
        }
        Ok(out)
    }

    /// Expected hitting time of the empty state from every state.
    ///
    /// Transitions only move between adjacent popcount levels, so the
    /// first-step system is block tridiagonal; it is solved by eliminating
    /// levels from the top down (dense LU per level) and substituting back.
    pub fn expected_absorption_times(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let mut levels: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        let mut slot = vec![0usize; self.state_count()];
        for s in 0..self.state_count() as u32 {
            let l = s.count_ones() as usize;
            slot[s as usize] = levels[l].len();
            levels[l].push(s);
        }
        // m_k = c_k + M_k m_{k-1} for k = n, ..., 1
        let mut c: Vec<DVector<f64>> = vec![DVector::zeros(0); n + 2];
        let mut big_m: Vec<DMatrix<f64>> = vec![DMatrix::zeros(0, 0); n + 2];
        for k in (1..=n).rev() {
            let here = &levels[k];
            let below = &levels[k - 1];
            let mut s_mat = DMatrix::<f64>::zeros(here.len(), here.len());
            let mut down = DMatrix::<f64>::zeros(here.len(), below.len());
            let mut rhs = DVector::<f64>::from_element(here.len(), 1.0);
            for (i, &s) in here.iter().enumerate() {
                s_mat[(i, i)] = self.exit_rate(s);
                self.for_each_transition(s, |target, r| {
                    let j = slot[target as usize];
                    if target.count_ones() as usize + 1 == k {
                        down[(i, j)] += r;
                    } else {
                        // up move: substitute m_{k+1} = c_{k+1} + M_{k+1} m_k
                        rhs[i] += r * c[k + 1][j];
                        for col in 0..here.len() {
                            s_mat[(i, col)] -= r * big_m[k + 1][(j, col)];
                        }
                    }
                });
            }
            let lu = s_mat.lu();
            c[k] =
                lu.solve(&rhs).ok_or_else(|| Error::Degenerate(format!("singular elimination block at level {k}")))?;
            big_m[k] =
                lu.solve(&down).ok_or_else(|| Error::Degenerate(format!("singular elimination block at level {k}")))?;
        }
        let mut times = vec![0.0; self.state_count()];
        let mut prev = DVector::<f64>::zeros(1);
        for k in 1..=n {
            let m = &c[k] + &big_m[k] * &prev;
            for (i, &s) in levels[k].iter().enumerate() {
                times[s as usize] = m[i];
            }
            prev = m;
        }
        Ok(times)
    }
}

/// `P(xi_t = empty)` started from `initial`.
pub fn exact_extinction_probability(g: &Graph, initial: &VertexSet, lambda: f64, t: f64) -> Result<f64> {
    let space = StateSpace::new(g, lambda)?;
    let start = space.mask(initial)?;
    Ok(space.transient(start, t)?[0])
}

/// Expected extinction time started from `initial`.
pub fn exact_expected_extinction_time(g: &Graph, initial: &VertexSet, lambda: f64) -> Result<f64> {
    let space = StateSpace::new(g, lambda)?;
    let start = space.mask(initial)?;
    Ok(space.expected_absorption_times()?[start as usize])
}
