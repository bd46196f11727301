//! Insert-once cache of Clebsch–Gordan columns shared across threads.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use qso3_core::qcg::{qcg_column, CgEntry};
use qso3_core::{DeformationParam, HalfInt, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct ColumnKey {
    j1: HalfInt,
    j2: HalfInt,
    j: HalfInt,
    m: HalfInt,
    base_inverted: bool,
    tau_bits: u64,
}

/// Columns keyed by `(j1, j2, J, M, base flag, τ)`. A column is computed
/// outside the lock; the first insertion for a key wins and is never
/// replaced, so every reader sees the same `Arc`.
#[derive(Debug, Default)]
pub struct CgCache {
    map: RwLock<HashMap<ColumnKey, Arc<Vec<CgEntry>>>>,
}

impl CgCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn column(
        &self,
        j1: HalfInt,
        j2: HalfInt,
        j: HalfInt,
        m: HalfInt,
        base_inverted: bool,
        p: DeformationParam,
    ) -> Result<Arc<Vec<CgEntry>>> {
        let key = ColumnKey { j1, j2, j, m, base_inverted, tau_bits: p.tau().to_bits() };
        if let Some(c) = self.map.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(c));
        }
        let fresh = Arc::new(qcg_column(j1, j2, j, m, base_inverted, p)?);
        let mut w = self.map.write().expect("cache lock");
        Ok(Arc::clone(w.entry(key).or_insert(fresh)))
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rayon::prelude::*;

    #[test]
    fn concurrent_readers_share_one_entry() {
        let cache = CgCache::new();
        let p = DeformationParam::new(0.2).unwrap();
        let cols: Vec<_> = (0..64)
            .into_par_iter()
            .map(|_| cache.column(2.into(), 1.into(), 2.into(), 1.into(), false, p).unwrap())
            .collect();
        assert_eq!(cache.len(), 1);
        assert!(cols.iter().all(|c| Arc::ptr_eq(c, &cols[0])));
        let direct = qcg_column(2.into(), 1.into(), 2.into(), 1.into(), false, p).unwrap();
        assert_eq!(*cols[0], direct);
    }
}
