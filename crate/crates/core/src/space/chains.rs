//! Longest chains over the link relation: intrinsic time separation and
//! discrete geodesics.

use serde::{Deserialize, Serialize};

use super::{DiscreteSpace, Provenance, SpaceError};

/// Relative tolerance under which two chain lengths count as tied.
pub const CHAIN_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntrinsicMode {
    /// Number of links in the longest chain.
    LinkCount,
    /// Largest sum of link `τ` values over chains.
    Weighted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub vertices: Vec<usize>,
    pub tau_length: f64,
}

impl Chain {
    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// `τ`-arclength of each vertex measured from the first.
    pub fn arclengths(&self, sp: &DiscreteSpace) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = vec![0.0];
        for w in self.vertices.windows(2) {
            acc += sp.tau(w[0], w[1]);
            out.push(acc);
        }
        out
    }
}

/// Maximal chain between two points with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicChain {
    pub chain: Chain,
    /// `τ(x, y)` minus the chain length; zero for a distance realizer.
    pub gap: f64,
    /// Number of maximal chains, saturating.
    pub multiplicity: u64,
    /// Every consecutive pair is timelike related.
    pub regular: bool,
}

fn tied(a: f64, b: f64) -> bool {
    a >= b - CHAIN_TIE_TOLERANCE * b.abs().max(1.0)
}

impl DiscreteSpace {
    fn topo_positions(&self) -> Result<Vec<usize>, SpaceError> {
        let order = self
            .topological_order()
            .ok_or_else(|| SpaceError::CyclicOrder(self.first_cycle_point()))?;
        let mut pos = vec![0usize; self.len()];
        for (k, &i) in order.iter().enumerate() {
            pos[i as usize] = k;
        }
        Ok(pos)
    }

    fn first_cycle_point(&self) -> usize {
        (0..self.len())
            .find(|&i| self.future(i).iter().any(|&j| self.causal(j as usize, i)))
            .unwrap_or(0)
    }

    /// Space with the same order and `τ` replaced by longest-chain values.
    pub fn tau_intrinsic(&self, mode: IntrinsicMode) -> Result<DiscreteSpace, SpaceError> {
        let pos = self.topo_positions()?;
        let n = self.len();
        let mut best = vec![f64::NEG_INFINITY; n];
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut seq: Vec<usize> = Vec::new();
        for x in 0..n {
            seq.clear();
            seq.extend(self.future(x).iter().map(|&j| j as usize));
            seq.sort_unstable_by_key(|&j| pos[j]);
            best[x] = 0.0;
            for w in std::iter::once(x).chain(seq.iter().copied()) {
                let bw = best[w];
                if bw == f64::NEG_INFINITY {
                    continue;
                }
                for &v in self.links(w) {
                    let v = v as usize;
                    let weight = match mode {
                        IntrinsicMode::LinkCount => 1.0,
                        IntrinsicMode::Weighted => self.tau(w, v),
                    };
                    if bw + weight > best[v] {
                        best[v] = bw + weight;
                    }
                }
            }
            rows.push(self.future(x).iter().map(|&j| best[j as usize].max(0.0)).collect());
            best[x] = f64::NEG_INFINITY;
            for &j in &seq {
                best[j] = f64::NEG_INFINITY;
            }
        }
        Ok(self.with_tau(Provenance::Intrinsic, |i, j| {
            let k = self.future(i).binary_search(&(j as u32)).unwrap();
            rows[i][k]
        }))
    }

    /// Maximal chain over links from `x` to `y`, lexicographically smallest
    /// among ties.
    pub fn geodesic_chain(&self, x: usize, y: usize) -> Result<GeodesicChain, SpaceError> {
        self.geodesic_chain_excluding(x, y, &[])?
            .ok_or(SpaceError::NotTimelikeRelated { x, y })
    }

    /// Maximal chain from `x` to `y` through none of `exclude`. Returns `None`
    /// when every chain avoiding them is strictly shorter than the overall
    /// maximum.
    pub fn geodesic_chain_excluding(
        &self,
        x: usize,
        y: usize,
        exclude: &[usize],
    ) -> Result<Option<GeodesicChain>, SpaceError> {
        let n = self.len();
        for &i in &[x, y] {
            if i >= n {
                return Err(SpaceError::IndexOutOfRange { index: i, len: n });
            }
        }
        if !self.timelike(x, y) || !self.causal(x, y) {
            return Err(SpaceError::NotTimelikeRelated { x, y });
        }
        let pos = self.topo_positions()?;
        let mut diamond = self.causal_diamond(x, y);
        diamond.sort_unstable_by_key(|&w| std::cmp::Reverse(pos[w]));

        let run = |skip: &[usize]| {
            let mut to_y = vec![f64::NEG_INFINITY; n];
            let mut count = vec![0u64; n];
            to_y[y] = 0.0;
            count[y] = 1;
            for &w in &diamond {
                if w == y || (w != x && skip.contains(&w)) {
                    continue;
                }
                let mut best = f64::NEG_INFINITY;
                for &v in self.links(w) {
                    let v = v as usize;
                    if to_y[v] > f64::NEG_INFINITY {
                        best = best.max(self.tau(w, v) + to_y[v]);
                    }
                }
                if best == f64::NEG_INFINITY {
                    continue;
                }
                let mut c = 0u64;
                for &v in self.links(w) {
                    let v = v as usize;
                    if to_y[v] > f64::NEG_INFINITY && tied(self.tau(w, v) + to_y[v], best) {
                        c = c.saturating_add(count[v]);
                    }
                }
                to_y[w] = best;
                count[w] = c;
            }
            (to_y, count)
        };

        let (full, full_count) = run(&[]);
        let (to_y, count) = if exclude.is_empty() {
            (full.clone(), full_count)
        } else {
            run(exclude)
        };
        if to_y[x] == f64::NEG_INFINITY || !tied(to_y[x], full[x]) {
            return Ok(None);
        }

        let mut vertices = vec![x];
        let mut cur = x;
        while cur != y {
            let next = self
                .links(cur)
                .iter()
                .map(|&v| v as usize)
                .find(|&v| to_y[v] > f64::NEG_INFINITY && tied(self.tau(cur, v) + to_y[v], to_y[cur]))
                .expect("a maximizing successor exists on every maximal chain");
            vertices.push(next);
            cur = next;
        }
        let chain = self.chain(vertices);
        let regular = chain.vertices.windows(2).all(|w| self.timelike(w[0], w[1]));
        Ok(Some(GeodesicChain {
            gap: self.tau(x, y) - chain.tau_length,
            multiplicity: count[x],
            regular,
            chain,
        }))
    }

    /// Chain through the given vertices with its `τ`-length.
    pub fn chain(&self, vertices: Vec<usize>) -> Chain {
        let tau_length = vertices.windows(2).map(|w| self.tau(w[0], w[1])).sum();
        Chain { vertices, tau_length }
    }
}
