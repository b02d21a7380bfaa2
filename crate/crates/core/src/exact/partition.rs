use rug::Integer;

use crate::error::{Error, Result};

/// Largest table size accepted by [`PartitionTable::new`].
pub const MAX_TABLE_N: usize = 10_000_000;

/// Exact values p(0), …, p(max_n) of the partition function.
#[derive(Clone, Debug)]
pub struct PartitionTable {
    values: Vec<Integer>,
}

impl PartitionTable {
    /// Builds the table with Euler's pentagonal-number recurrence
    ///
    /// p(n) = Σ_{k≥1} (−1)^{k+1} [p(n − k(3k−1)/2) + p(n − k(3k+1)/2)].
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n > MAX_TABLE_N {
            return Err(Error::ResourceLimit(format!(
                "partition table up to {max_n} exceeds the limit {MAX_TABLE_N}"
            )));
        }
        let mut values: Vec<Integer> = Vec::with_capacity(max_n + 1);
        values.push(Integer::from(1));
        for n in 1..=max_n {
            let mut acc = Integer::new();
            for k in 1.. {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > n {
                    break;
                }
                let g2 = k * (3 * k + 1) / 2;
                if k % 2 == 1 {
                    acc += &values[n - g1];
                    if g2 <= n {
                        acc += &values[n - g2];
                    }
                } else {
                    acc -= &values[n - g1];
                    if g2 <= n {
                        acc -= &values[n - g2];
                    }
                }
            }
            values.push(acc);
        }
        Ok(PartitionTable { values })
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<&Integer> {
        self.values
            .get(n)
            .ok_or(Error::TableTooShort { need: n, have: self.max_n() })
    }

    pub fn values(&self) -> &[Integer] {
        &self.values
    }

    /// Fails unless the table covers index `n`.
    pub fn require(&self, n: usize) -> Result<()> {
        self.get(n).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts partitions of `n` into parts of size at most `max_part` by direct recursion.
    fn brute_force(n: usize, max_part: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max_part.min(n)).map(|k| brute_force(n - k, k)).sum()
    }

    #[test]
    fn matches_enumeration_up_to_20() {
        let t = PartitionTable::new(20).unwrap();
        for n in 0..=20 {
            assert_eq!(*t.get(n).unwrap(), brute_force(n, n), "p({n})");
        }
    }

    #[test]
    fn known_values() {
        let t = PartitionTable::new(100).unwrap();
        assert_eq!(PartitionTable::new(0).unwrap().values(), &[Integer::from(1)]);
        assert_eq!(*t.get(5).unwrap(), 7);
        assert_eq!(*t.get(10).unwrap(), 42);
        assert_eq!(*t.get(100).unwrap(), 190_569_292u64);
    }

    #[test]
    fn monotone_and_positive() {
        let t = PartitionTable::new(500).unwrap();
        assert!(t.values().windows(2).skip(1).all(|w| w[0] <= w[1]));
        assert!(t.values().iter().all(|v| *v >= 1));
    }

    #[test]
    fn out_of_range_lookup_and_limit() {
        let t = PartitionTable::new(10).unwrap();
        assert!(matches!(t.get(11), Err(Error::TableTooShort { need: 11, have: 10 })));
        assert!(matches!(PartitionTable::new(MAX_TABLE_N + 1), Err(Error::ResourceLimit(_))));
    }
}
