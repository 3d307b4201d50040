//! Integer partitions: the combinatorial shape of a product basis' type.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported `n`.
pub const MAX_N: usize = 64;

/// A weakly decreasing, non-empty list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into canonical order.
    pub fn from_unordered(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, part) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"3+2+1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('+')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

fn check_range(n: usize) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::OutOfRange(n))
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn partitions_of(n: usize) -> Result<Vec<Partition>> {
    check_range(n)?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    extend(n, n, &mut current, &mut out);
    Ok(out)
}

fn extend(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        extend(remaining - part, part, current, out);
        current.pop();
    }
}

/// p(n), by the standard "parts at most k" dynamic program.
pub fn partition_count(n: usize) -> Result<u64> {
    check_range(n)?;
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    Ok(ways[n])
}

/// `p(n) + 1`: one type per partition, plus the second basis of type `[n]`.
pub fn type_count_lower_bound(n: usize) -> Result<u64> {
    Ok(partition_count(n)? + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: every composition of n (bitmask of cut points), sorted and
    /// deduplicated.
    fn enumerate_by_compositions(n: usize) -> Vec<Vec<usize>> {
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << (n - 1)) {
            let mut parts = Vec::new();
            let mut run = 1;
            for bit in 0..(n - 1) {
                if mask & (1 << bit) != 0 {
                    parts.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            parts.push(run);
            parts.sort_unstable_by(|a, b| b.cmp(a));
            seen.insert(parts);
        }
        // reverse lexicographic
        seen.into_iter().rev().collect()
    }

    #[test]
    fn small_cases() {
        let one = partitions_of(1).unwrap();
        assert_eq!(one, vec![Partition::new(vec![1]).unwrap()]);

        let three: Vec<Vec<usize>> = partitions_of(3)
            .unwrap()
            .into_iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(three, vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(three, enumerate_by_compositions(3));

        assert_eq!(partitions_of(4).unwrap().len(), 5);
    }

    #[test]
    fn matches_brute_force_enumeration() {
        for n in 1..=14 {
            let ours: Vec<Vec<usize>> = partitions_of(n)
                .unwrap()
                .into_iter()
                .map(|p| p.parts().to_vec())
                .collect();
            assert_eq!(ours, enumerate_by_compositions(n), "n = {n}");
        }
    }

    #[test]
    fn counts() {
        assert_eq!(partition_count(1).unwrap(), 1);
        assert_eq!(
            partition_count(6).unwrap(),
            enumerate_by_compositions(6).len() as u64
        );
        assert_eq!(partition_count(6).unwrap(), 11);
        assert_eq!(type_count_lower_bound(1).unwrap(), 2);
        assert_eq!(type_count_lower_bound(4).unwrap(), 6);
        assert_eq!(type_count_lower_bound(6).unwrap(), 12);
    }

    #[test]
    fn range_errors() {
        assert_eq!(partitions_of(0), Err(Error::OutOfRange(0)));
        assert_eq!(partition_count(65), Err(Error::OutOfRange(65)));
        assert_eq!(type_count_lower_bound(0), Err(Error::OutOfRange(0)));
        assert!(partition_count(64).is_ok());
    }

    #[test]
    fn parse_and_display() {
        let p: Partition = "3+2+1".parse().unwrap();
        assert_eq!(p.parts(), &[3, 2, 1]);
        assert_eq!(p.n(), 6);
        assert_eq!(p.to_string(), "3+2+1");
        assert!("1+2".parse::<Partition>().is_err());
        assert!("3+0".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
        assert!("2+x".parse::<Partition>().is_err());
        assert_eq!(
            Partition::from_unordered(vec![1, 3, 2])
                .unwrap()
                .to_string(),
            "3+2+1"
        );
    }
}
