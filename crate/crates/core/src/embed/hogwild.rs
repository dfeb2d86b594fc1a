use std::sync::atomic::{AtomicU64, Ordering};

/// Parameter vector shared by trainer threads without locking. Each entry is
/// read and written atomically, but read-modify-write sequences from different
/// workers may interleave; with a single worker the result is deterministic.
pub(crate) struct SharedTable {
    cells: Vec<AtomicU64>,
}

impl SharedTable {
    pub fn from_vec(values: Vec<f64>) -> Self {
        SharedTable {
            cells: values.into_iter().map(|x| AtomicU64::new(x.to_bits())).collect(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        f64::from_bits(self.cells[i].load(Ordering::Relaxed))
    }

    #[inline]
    pub fn set(&self, i: usize, x: f64) {
        self.cells[i].store(x.to_bits(), Ordering::Relaxed);
    }

    #[inline]
    pub fn add(&self, i: usize, delta: f64) {
        self.set(i, self.get(i) + delta);
    }

    pub fn dot(&self, a: usize, other: &SharedTable, b: usize, len: usize) -> f64 {
        (0..len).map(|k| self.get(a + k) * other.get(b + k)).sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.cells.into_iter().map(|c| f64::from_bits(c.into_inner())).collect()
    }
}

/// Derives independent stream seeds from a run seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(0x94D0_49BB_1331_11EB);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
