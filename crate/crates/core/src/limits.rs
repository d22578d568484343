use crate::error::{Error, Result};

/// Size caps for the enumerations behind formula construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `m` for which all of `S_m` may be enumerated.
    pub max_permutation_m: usize,
    /// Largest `m` for which all set partitions of `{1..m}` may be enumerated.
    pub max_set_partition_m: usize,
    /// Partitions up to this length are expanded over permutations when
    /// building `X_k`; longer ones go through set partitions.
    pub direct_max_len: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_permutation_m: 10,
            max_set_partition_m: 12,
            direct_max_len: 9,
        }
    }
}

impl Limits {
    pub(crate) fn check_permutations(&self, m: usize) -> Result<()> {
        if m > self.max_permutation_m {
            return Err(Error::ResourceLimit {
                what: format!("enumerating S_{m}"),
                requested: m,
                cap: self.max_permutation_m,
                hint: Some("use the collapsed set-partition construction".into()),
            });
        }
        Ok(())
    }

    pub(crate) fn check_set_partitions(&self, m: usize) -> Result<()> {
        if m > self.max_set_partition_m {
            return Err(Error::ResourceLimit {
                what: format!("enumerating set partitions of {m} elements"),
                requested: m,
                cap: self.max_set_partition_m,
                hint: None,
            });
        }
        Ok(())
    }
}
