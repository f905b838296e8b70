use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::{Error, Result};

/// Canonical label encoding: a fixed-width tuple of small integers.
pub type Label = Vec<u32>;

/// One basis element before ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisEntry {
    pub label: Label,
    pub gram: f64,
    pub parity: u8,
    pub energy: u32,
}

impl BasisEntry {
    pub fn new(label: Label, gram: f64, parity: u8, energy: u32) -> Self {
        BasisEntry {
            label,
            gram,
            parity: parity & 1,
            energy,
        }
    }
}

/// Ordered labeled basis with a positive diagonal Gram matrix.
///
/// Labels are sorted lexicographically. Each element also carries a
/// parity (for Koszul signs) and an integer energy used by truncations.
#[derive(Debug)]
pub struct Basis {
    kind: String,
    labels: Vec<Label>,
    gram: Vec<f64>,
    parity: Vec<u8>,
    energy: Vec<u32>,
    index: HashMap<Label, usize>,
    fingerprint: u64,
}

impl Basis {
    pub fn new(kind: impl Into<String>, mut entries: Vec<BasisEntry>) -> Result<Arc<Basis>> {
        entries.sort_by(|a, b| a.label.cmp(&b.label));
        for w in entries.windows(2) {
            if w[0].label == w[1].label {
                return Err(Error::DuplicateLabel(w[0].label.clone()));
            }
        }
        for e in &entries {
            if !(e.gram > 0.0) || !e.gram.is_finite() {
                return Err(Error::NonPositiveGram {
                    label: e.label.clone(),
                    weight: e.gram,
                });
            }
        }
        let kind = kind.into();
        let mut hasher = DefaultHasher::new();
        kind.hash(&mut hasher);
        let mut labels = Vec::with_capacity(entries.len());
        let mut gram = Vec::with_capacity(entries.len());
        let mut parity = Vec::with_capacity(entries.len());
        let mut energy = Vec::with_capacity(entries.len());
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            e.label.hash(&mut hasher);
            e.gram.to_bits().hash(&mut hasher);
            index.insert(e.label.clone(), i);
            labels.push(e.label);
            gram.push(e.gram);
            parity.push(e.parity);
            energy.push(e.energy);
        }
        Ok(Arc::new(Basis {
            kind,
            labels,
            gram,
            parity,
            energy,
            index,
            fingerprint: hasher.finish(),
        }))
    }

    /// Orthonormal, even, zero-energy basis labeled `[0]..[dim-1]`.
    pub fn standard(kind: impl Into<String>, dim: usize) -> Arc<Basis> {
        let entries = (0..dim)
            .map(|i| BasisEntry::new(vec![i as u32], 1.0, 0, 0))
            .collect();
        Basis::new(kind, entries).expect("standard basis is valid")
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn gram(&self, i: usize) -> f64 {
        self.gram[i]
    }

    pub fn grams(&self) -> &[f64] {
        &self.gram
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parity[i]
    }

    pub fn energy(&self, i: usize) -> u32 {
        self.energy[i]
    }

    pub fn index_of(&self, label: &[u32]) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn same_as(&self, other: &Basis) -> bool {
        std::ptr::eq(self, other)
            || (self.fingerprint == other.fingerprint && self.labels == other.labels)
    }

    pub fn entry(&self, i: usize) -> BasisEntry {
        BasisEntry::new(
            self.labels[i].clone(),
            self.gram[i],
            self.parity[i],
            self.energy[i],
        )
    }

    /// Sub-basis keeping the elements selected by `keep`, in order.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Result<Arc<Basis>> {
        let entries = (0..self.dim()).filter(|&i| keep(i)).map(|i| self.entry(i)).collect();
        Basis::new(format!("{}|sub", self.kind), entries)
    }
}

pub(crate) fn check_same(a: &Basis, b: &Basis, what: &str) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::BasisMismatch(format!(
            "{what}: '{}' (dim {}) vs '{}' (dim {})",
            a.kind(),
            a.dim(),
            b.kind(),
            b.dim()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_indexed() {
        let b = Basis::new(
            "t",
            vec![
                BasisEntry::new(vec![1, 0], 2.0, 0, 1),
                BasisEntry::new(vec![0, 2], 1.0, 1, 4),
                BasisEntry::new(vec![0, 1], 1.0, 1, 2),
            ],
        )
        .unwrap();
        assert_eq!(b.labels(), &[vec![0, 1], vec![0, 2], vec![1, 0]]);
        assert_eq!(b.index_of(&[1, 0]), Some(2));
        assert_eq!(b.gram(2), 2.0);
        assert_eq!(b.energy(1), 4);
    }

    #[test]
    fn rejects_bad_entries() {
        let dup = Basis::new(
            "t",
            vec![BasisEntry::new(vec![0], 1.0, 0, 0), BasisEntry::new(vec![0], 1.0, 0, 0)],
        );
        assert!(matches!(dup, Err(Error::DuplicateLabel(_))));
        let neg = Basis::new("t", vec![BasisEntry::new(vec![0], 0.0, 0, 0)]);
        assert!(matches!(neg, Err(Error::NonPositiveGram { .. })));
    }

    #[test]
    fn same_content_same_basis() {
        let a = Basis::standard("s", 3);
        let b = Basis::standard("s", 3);
        assert!(a.same_as(&b));
        assert!(!a.same_as(&Basis::standard("s", 4)));
    }
}
