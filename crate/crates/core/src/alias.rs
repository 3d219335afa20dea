//! Walker/Vose alias tables: linear-time construction, constant-time draws.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

// Scaled weights at least this close to 1 go to the "large" worklist.
const LARGE_THRESHOLD: f64 = 1.0 - 1e-15;

/// Largest table size; worklist indices are 32-bit.
pub const MAX_CATEGORIES: usize = 1 << 32;

#[derive(Debug, Clone, Copy)]
struct Slot {
    prob: f64,
    alias: usize,
}

/// Categorical sampler over a fixed vector of non-negative weights.
///
/// Each draw consumes exactly two 64-bit outputs from the generator: one picks
/// a slot uniformly, the other is the biased coin choosing between the slot
/// and its alias.
#[derive(Debug, Clone)]
pub struct AliasTable {
    slots: Vec<Slot>,
    total_weight: f64,
}

/// Reusable worklists for [`pair_up`], sized to the largest table seen.
#[derive(Default)]
struct Worklists {
    small: Vec<u32>,
    large: Vec<u32>,
}

/// Turns slots holding scaled weights (mean 1) into a finished table.
fn pair_up(slots: &mut [Slot], work: &mut Worklists) {
    let size = slots.len();
    assert!(size <= MAX_CATEGORIES, "alias table with {size} categories");
    if work.small.len() < size {
        work.small.resize(size, 0);
        work.large.resize(size, 0);
    }
    let (small, large) = (&mut work.small[..size], &mut work.large[..size]);
    let (mut ns, mut nl) = (0, 0);
    for (k, slot) in slots.iter().enumerate() {
        let is_small = slot.prob < LARGE_THRESHOLD;
        small[ns] = k as u32;
        large[nl] = k as u32;
        ns += is_small as usize;
        nl += !is_small as usize;
    }
    while ns > 0 && nl > 0 {
        ns -= 1;
        let (s, l) = (small[ns] as usize, large[nl - 1] as usize);
        slots[s].alias = l;
        let rest = (slots[l].prob + slots[s].prob) - 1.0;
        slots[l].prob = rest;
        if rest < LARGE_THRESHOLD {
            nl -= 1;
            small[ns] = l as u32;
            ns += 1;
        }
    }
    // Leftovers on either list are full slots up to rounding.
    for &k in large[..nl].iter().chain(&small[..ns]) {
        let k = k as usize;
        slots[k] = Slot { prob: 1.0, alias: k };
    }
}

impl AliasTable {
    /// Builds the table with the two-worklist method in `O(len)`.
    pub fn build(weights: &[f64]) -> Result<Self> {
        let mut total_weight = 0.0;
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { index });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { index, value: w });
            }
            total_weight += w;
        }
        if total_weight <= 0.0 {
            return Err(Error::AllZeroWeights);
        }
        if weights.len() > MAX_CATEGORIES {
            return Err(Error::ResourceLimit {
                requested: weights.len(),
                cap: MAX_CATEGORIES,
            });
        }

        let scale = weights.len() as f64 / total_weight;
        let mut slots: Vec<Slot> = weights
            .iter()
            .map(|w| Slot {
                prob: w * scale,
                alias: 0,
            })
            .collect();
        pair_up(&mut slots, &mut Worklists::default());
        Ok(Self { slots, total_weight })
    }

    /// One table per column of `m` with positive sum, built in a single pass
    /// over the row-major data. `sums` must be the column sums of `m`.
    pub(crate) fn from_columns(m: &Matrix, sums: &[f64]) -> Vec<Option<Self>> {
        let rows = m.rows();
        let scales: Vec<f64> = sums.iter().map(|&c| rows as f64 / c).collect();
        let kept: Vec<usize> = (0..sums.len()).filter(|&u| sums[u] > 0.0).collect();
        let mut columns: Vec<Vec<Slot>> = sums.iter().map(|_| Vec::new()).collect();
        for &u in &kept {
            columns[u].reserve_exact(rows);
        }
        for row in m.as_slice().chunks_exact(m.cols().max(1)) {
            for &u in &kept {
                columns[u].push(Slot {
                    prob: row[u] * scales[u],
                    alias: 0,
                });
            }
        }
        let mut work = Worklists::default();
        columns
            .into_iter()
            .zip(sums)
            .map(|(mut slots, &total_weight)| {
                (total_weight > 0.0).then(|| {
                    pair_up(&mut slots, &mut work);
                    Self { slots, total_weight }
                })
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Acceptance probability of slot `k` (its own category).
    pub fn prob(&self, k: usize) -> f64 {
        self.slots[k].prob
    }

    pub fn alias(&self, k: usize) -> usize {
        self.slots[k].alias
    }

    #[inline]
    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        let wide = u128::from(rng.next_u64()) * self.slots.len() as u128;
        let slot = &self.slots[(wide >> 64) as usize];
        let coin: f64 = rng.random();
        if coin < slot.prob {
            (wide >> 64) as usize
        } else {
            slot.alias
        }
    }

    /// `count` independent draws, consuming the stream exactly as a loop of
    /// [`draw`](Self::draw) would.
    pub fn draw_many<R: RngCore + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<usize> {
        (0..count).map(|_| self.draw(rng)).collect()
    }

    /// Probability of each category implied by the table, computed by
    /// walking the slots rather than by sampling.
    pub fn implied_probabilities(&self) -> Vec<f64> {
        let size = self.slots.len() as f64;
        let mut probs = vec![0.0; self.slots.len()];
        for (k, slot) in self.slots.iter().enumerate() {
            probs[k] += slot.prob / size;
            probs[slot.alias] += (1.0 - slot.prob) / size;
        }
        probs
    }
}
