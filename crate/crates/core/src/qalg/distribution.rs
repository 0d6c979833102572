use super::scalar::Real;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Probability table over fixed-length bitstrings; qubit 0 is the leftmost bit.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionTable<T: Real> {
    bits: usize,
    probs: BTreeMap<String, T>,
}

impl<T: Real> DistributionTable<T> {
    pub fn new(bits: usize, probs: BTreeMap<String, T>) -> Result<Self> {
        for (k, p) in &probs {
            if k.len() != bits || !k.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::InvalidDistribution(format!("outcome \"{k}\" is not a {bits}-bit string")));
            }
            if *p < -T::lit(1e-12) || !p.is_finite() {
                return Err(Error::InvalidDistribution(format!("probability {p} for \"{k}\"")));
            }
        }
        let total: T = probs.values().copied().sum();
        if (total - T::one()).abs() > T::lit(1e-9).max(T::epsilon() * T::lit(1024.0)) {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { bits, probs })
    }

    /// Table from a dense vector indexed by basis state, qubit 0 most significant.
    pub fn from_dense(bits: usize, dense: &[T]) -> Result<Self> {
        if dense.len() != 1 << bits {
            return Err(Error::InvalidDistribution("dense vector length".into()));
        }
        let probs = dense
            .iter()
            .enumerate()
            .filter(|(_, p)| p.abs() > T::zero())
            .map(|(i, &p)| (bitstring(i, bits), p.max(T::zero())))
            .collect();
        Self::new(bits, probs)
    }

    /// Point mass on one outcome.
    pub fn point(outcome: &str) -> Result<Self> {
        Self::new(outcome.len(), BTreeMap::from([(outcome.to_string(), T::one())]))
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Probability of an outcome, zero when absent.
    pub fn prob(&self, outcome: &str) -> T {
        self.probs.get(outcome).copied().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, T)> {
        self.probs.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Outcome with the largest probability.
    pub fn mode(&self) -> Option<(&str, T)> {
        self.iter().fold(None, |best, (k, p)| match best {
            Some((_, bp)) if bp >= p => best,
            _ => Some((k, p)),
        })
    }
}

/// `|b⟩` index to bitstring, qubit 0 first.
pub fn bitstring(index: usize, bits: usize) -> String {
    (0..bits).map(|q| if (index >> (bits - 1 - q)) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Total variation distance `½ Σ |p − q|`.
pub fn tvd<T: Real>(p: &DistributionTable<T>, q: &DistributionTable<T>) -> T {
    let mut total = T::zero();
    for (k, pv) in p.iter() {
        total += (pv - q.prob(k)).abs();
    }
    for (k, qv) in q.iter() {
        if !p.probs.contains_key(k) {
            total += qv.abs();
        }
    }
    total / T::lit(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pairs: &[(&str, f64)]) -> DistributionTable<f64> {
        DistributionTable::new(pairs[0].0.len(), pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()).unwrap()
    }

    #[test]
    fn tvd_examples() {
        let a = table(&[("0", 0.75), ("1", 0.25)]);
        let b = table(&[("0", 0.5), ("1", 0.5)]);
        assert_eq!(tvd(&a, &a), 0.0);
        assert!((tvd(&a, &b) - 0.25).abs() < 1e-15);
        assert!((tvd(&table(&[("0", 1.0)]), &table(&[("1", 1.0)])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(DistributionTable::<f64>::new(2, BTreeMap::from([("0".to_string(), 1.0)])).is_err());
        assert!(DistributionTable::<f64>::new(1, BTreeMap::from([("0".to_string(), 0.7)])).is_err());
    }

    #[test]
    fn bitstrings_are_big_endian() {
        assert_eq!(bitstring(1, 3), "001");
        assert_eq!(bitstring(4, 3), "100");
    }
}
