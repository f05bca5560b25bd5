use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multi-index `m = (m_1, …, m_k)` of a mixed functional.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MixedIndex(pub Vec<usize>);

impl MixedIndex {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `type(m) = Σ m_i − (k − 1) n`.
    pub fn type_in(&self, n: usize) -> i64 {
        self.0.iter().sum::<usize>() as i64 - (self.0.len() as i64 - 1) * n as i64
    }
}

impl std::fmt::Display for MixedIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All ordered tuples in `{lo, …, hi}^k` summing to `total`, lexicographic.
fn tuples(lo: usize, hi: usize, k: usize, total: usize, out: &mut Vec<MixedIndex>) {
    fn rec(lo: usize, hi: usize, k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MixedIndex>) {
        if k == 0 {
            if left == 0 {
                out.push(MixedIndex(cur.clone()));
            }
            return;
        }
        for v in lo..=hi.min(left) {
            // remaining k−1 slots must be able to absorb the rest
            let rest = left - v;
            if rest < lo * (k - 1) || rest > hi * (k - 1) {
                continue;
            }
            cur.push(v);
            rec(lo, hi, k - 1, rest, cur, out);
            cur.pop();
        }
    }
    rec(lo, hi, k, total, &mut Vec::with_capacity(k), out);
}

/// `mix(j, k)`: tuples in `{j, …, n}^k` with `Σ m_i = (k − 1) n + j`.
pub fn enumerate_mix(j: usize, k: usize, n: usize) -> Result<Vec<MixedIndex>> {
    if j > n {
        return Err(Error::invalid("j", format!("need 0 ≤ j ≤ n, got j = {j}, n = {n}")));
    }
    if k == 0 {
        return Err(Error::invalid("k", "need k ≥ 1"));
    }
    let mut out = Vec::new();
    tuples(j, n, k, (k - 1) * n + j, &mut out);
    Ok(out)
}

/// `mix(j)`: all tuples of any length `s` with entries in `{j, …, n − 1}` and
/// `Σ m_i = (s − 1) n + j`; lengths are bounded by `n − j`.
pub fn enumerate_mix_reduced(j: usize, n: usize) -> Result<Vec<MixedIndex>> {
    if j >= n {
        return Err(Error::invalid("j", format!("need 0 ≤ j < n, got j = {j}, n = {n}")));
    }
    let mut out = Vec::new();
    for s in 1..=n - j {
        tuples(j, n - 1, s, (s - 1) * n + j, &mut out);
    }
    Ok(out)
}
