//! Where logical qubits and frozen blockade spins sit on the chain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::site_mask;

/// Physical spins carrying one logical qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitSites {
    /// One spin; |0>_L = |0>, |1>_L = |1>.
    Single(usize),
    /// Two adjacent spins; |0>_L = |01>, |1>_L = |10>.
    Pair(usize, usize),
}

impl QubitSites {
    pub fn sites(&self) -> Vec<usize> {
        match *self {
            QubitSites::Single(s) => vec![s],
            QubitSites::Pair(a, b) => vec![a, b],
        }
    }

    /// Sigma^z of each spin in terms of the logical z value (+1 for |0>_L).
    fn z_signs(&self) -> Vec<(usize, i64)> {
        match *self {
            QubitSites::Single(s) => vec![(s, -1)],
            QubitSites::Pair(a, b) => vec![(a, -1), (b, 1)],
        }
    }

    /// Bits set in the register index when the qubit holds `bit`.
    fn ones(&self, n_spins: usize, bit: bool) -> usize {
        match (*self, bit) {
            (QubitSites::Single(_), false) => 0,
            (QubitSites::Single(s), true) => site_mask(n_spins, s),
            (QubitSites::Pair(_, b), false) => site_mask(n_spins, b),
            (QubitSites::Pair(a, _), true) => site_mask(n_spins, a),
        }
    }
}

/// A frozen spin and the basis state (0 or 1) it is held in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrozenSite {
    pub site: usize,
    pub state: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogicalLayout {
    pub n_spins: usize,
    pub n_logical: usize,
    pub blockade_width: usize,
    pub qubit_sites: Vec<QubitSites>,
    pub blockade_sites: Vec<Vec<FrozenSite>>,
}

impl LogicalLayout {
    /// Pair-encoded qubits separated by blocks of `m` blockades in |0>,
    /// with one block at each chain end. `pair_encoded(2, 2)` is the
    /// ten-spin chain with qubits on (3,4) and (7,8).
    pub fn pair_encoded(n_logical: usize, m: usize) -> Result<Self> {
        if n_logical == 0 || m == 0 {
            return Err(Error::invalid(
                "need at least one logical qubit and blockade width >= 1",
            ));
        }
        let mut qubit_sites = Vec::with_capacity(n_logical);
        let mut blockade_sites = Vec::with_capacity(n_logical + 1);
        let mut next = 1;
        let block = |start: usize| {
            (start..start + m)
                .map(|site| FrozenSite { site, state: 0 })
                .collect()
        };
        for _ in 0..n_logical {
            blockade_sites.push(block(next));
            next += m;
            qubit_sites.push(QubitSites::Pair(next, next + 1));
            next += 2;
        }
        blockade_sites.push(block(next));
        next += m;
        Self::new(next - 1, m, qubit_sites, blockade_sites)
    }

    /// 2n+1 spins, single-spin qubits on even sites, blockades on odd sites
    /// alternating |0>, |1>, |0>, ... from the left.
    pub fn single_spin(n_logical: usize) -> Result<Self> {
        if n_logical == 0 {
            return Err(Error::invalid("need at least one logical qubit"));
        }
        let qubit_sites = (1..=n_logical).map(|k| QubitSites::Single(2 * k)).collect();
        let blockade_sites = (1..=n_logical + 1)
            .map(|k| {
                vec![FrozenSite {
                    site: 2 * k - 1,
                    state: if k % 2 == 1 { 0 } else { 1 },
                }]
            })
            .collect();
        Self::new(2 * n_logical + 1, 1, qubit_sites, blockade_sites)
    }

    pub fn new(
        n_spins: usize,
        blockade_width: usize,
        qubit_sites: Vec<QubitSites>,
        blockade_sites: Vec<Vec<FrozenSite>>,
    ) -> Result<Self> {
        let layout = LogicalLayout {
            n_spins,
            n_logical: qubit_sites.len(),
            blockade_width,
            qubit_sites,
            blockade_sites,
        };
        layout.validate()?;
        Ok(layout)
    }

    /// Sites must partition 1..=n_spins.
    pub fn validate(&self) -> Result<()> {
        if self.n_logical != self.qubit_sites.len() {
            return Err(Error::invalid("n_logical does not match qubit_sites"));
        }
        let mut seen = vec![false; self.n_spins + 1];
        let mut mark = |site: usize| -> Result<()> {
            if site == 0 || site > self.n_spins {
                return Err(Error::SiteOutOfRange {
                    site,
                    n_spins: self.n_spins,
                });
            }
            if std::mem::replace(&mut seen[site], true) {
                return Err(Error::invalid(format!("site {site} assigned twice")));
            }
            Ok(())
        };
        for q in &self.qubit_sites {
            if let QubitSites::Pair(a, b) = *q {
                if b != a + 1 {
                    return Err(Error::invalid(format!("pair ({a},{b}) is not adjacent")));
                }
            }
            q.sites().into_iter().try_for_each(&mut mark)?;
        }
        for f in self.blockade_sites.iter().flatten() {
            if f.state > 1 {
                return Err(Error::invalid(format!(
                    "blockade state {} is not 0 or 1",
                    f.state
                )));
            }
            mark(f.site)?;
        }
        if let Some(site) = (1..=self.n_spins).find(|&s| !seen[s]) {
            return Err(Error::invalid(format!(
                "site {site} is neither qubit nor blockade"
            )));
        }
        Ok(())
    }

    pub fn is_pair_encoded(&self) -> bool {
        self.qubit_sites
            .iter()
            .all(|q| matches!(q, QubitSites::Pair(..)))
    }

    fn frozen(&self) -> impl Iterator<Item = &FrozenSite> {
        self.blockade_sites.iter().flatten()
    }

    /// Register index of the logical basis state `logical`; qubit 0 is the
    /// most significant logical bit.
    pub fn basis_index(&self, logical: usize) -> usize {
        let n = self.n_logical;
        let mut idx: usize = self
            .frozen()
            .filter(|f| f.state == 1)
            .map(|f| site_mask(self.n_spins, f.site))
            .sum();
        for (q, sites) in self.qubit_sites.iter().enumerate() {
            idx |= sites.ones(self.n_spins, (logical >> (n - 1 - q)) & 1 == 1);
        }
        idx
    }

    /// Register indices of all 2^n_logical logical basis states.
    pub fn logical_basis(&self) -> Vec<usize> {
        (0..1usize << self.n_logical)
            .map(|l| self.basis_index(l))
            .collect()
    }

    /// Sigma^z value of every site as (constant, Some((qubit, sign))).
    fn site_values(&self) -> Vec<(i64, Option<(usize, i64)>)> {
        let mut v = vec![(0, None); self.n_spins + 1];
        for f in self.frozen() {
            v[f.site] = (if f.state == 1 { 1 } else { -1 }, None);
        }
        for (q, sites) in self.qubit_sites.iter().enumerate() {
            for (site, sign) in sites.z_signs() {
                v[site] = (0, Some((q, sign)));
            }
        }
        v
    }
}

/// Logical-qubit fields and couplings left over from the Ising terms
/// sum_k J_k sum_i Z_i Z_{i+k} after the blockades are frozen.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualTerms {
    /// Coefficient of z_q.
    pub fields: Vec<f64>,
    /// Coefficient of z_q z_r, q < r.
    pub couplings: Vec<(usize, usize, f64)>,
}

impl ResidualTerms {
    pub fn max_abs(&self) -> f64 {
        self.fields
            .iter()
            .chain(self.couplings.iter().map(|c| &c.2))
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Expands the Ising energy in logical z values. Counts are kept as
/// integers per order so exact cancellation stays exact.
pub fn blockade_residual_terms(layout: &LogicalLayout, couplings: &[f64]) -> Result<ResidualTerms> {
    layout.validate()?;
    if couplings.iter().any(|j| !j.is_finite()) {
        return Err(Error::NonFinite("couplings"));
    }
    let nq = layout.n_logical;
    let values = layout.site_values();
    let mut fields = vec![vec![0i64; couplings.len()]; nq];
    let mut pair = vec![vec![vec![0i64; couplings.len()]; nq]; nq];
    for (k, _) in couplings.iter().enumerate() {
        let d = k + 1;
        for i in 1..=layout.n_spins.saturating_sub(d) {
            match (values[i], values[i + d]) {
                ((_, Some((q, s))), (c, None)) | ((c, None), (_, Some((q, s)))) => {
                    fields[q][k] += s * c
                }
                ((_, Some((q, s))), (_, Some((r, t)))) if q != r => {
                    let (a, b) = (q.min(r), q.max(r));
                    pair[a][b][k] += s * t;
                }
                _ => {}
            }
        }
    }
    let weigh = |counts: &[i64]| {
        counts
            .iter()
            .zip(couplings)
            .map(|(&c, &j)| c as f64 * j)
            .sum::<f64>()
    };
    let fields = fields.iter().map(|c| weigh(c)).collect();
    let mut cross = Vec::new();
    for (a, row) in pair.iter().enumerate() {
        for (b, counts) in row.iter().enumerate().skip(a + 1) {
            cross.push((a, b, weigh(counts)));
        }
    }
    Ok(ResidualTerms {
        fields,
        couplings: cross,
    })
}

/// Largest uncancelled logical field or logical-logical Ising coupling.
/// `couplings[k]` is the order-(k+1) strength.
pub fn verify_blockade_cancellation(layout: &LogicalLayout, couplings: &[f64]) -> Result<f64> {
    Ok(blockade_residual_terms(layout, couplings)?.max_abs())
}
