use std::collections::HashMap;
use std::sync::OnceLock;

use super::FPModule;
use crate::error::{Error, Result};

/// Default cap on the size of explicitly enumerated modules.
pub const DEFAULT_MAX_CARD: u128 = 4096;

/// The enumeration cap, from `COTLAB_MAX_CARD` when set and parseable.
pub fn max_card() -> u128 {
    static CAP: OnceLock<u128> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("COTLAB_MAX_CARD")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_CARD)
    })
}

/// Every element of a finite module, as generator coordinates.
///
/// Elements are listed in mixed-radix order of their normal coordinates, so
/// index `0` is always zero and [`ElementTable::index_of`] is a bijection
/// onto `0..len()`.
#[derive(Clone, Debug)]
pub struct ElementTable {
    module: FPModule,
    elements: Vec<Vec<u64>>,
}

impl ElementTable {
    pub fn new(module: &FPModule, cap: u128) -> Result<ElementTable> {
        let card = module.cardinality();
        if card > cap {
            return Err(Error::TooLarge(card, cap));
        }
        let inv = module.invariants();
        let mut elements = Vec::with_capacity(card as usize);
        let mut y = vec![0u64; inv.len()];
        for _ in 0..card {
            elements.push(module.from_canonical(&y));
            for k in (0..y.len()).rev() {
                y[k] += 1;
                if y[k] < inv[k] {
                    break;
                }
                y[k] = 0;
            }
        }
        Ok(ElementTable {
            module: module.clone(),
            elements,
        })
    }

    pub fn module(&self) -> &FPModule {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &[u64] {
        &self.elements[i]
    }

    /// Position of the element represented by `v`.
    pub fn index_of(&self, v: &[u64]) -> usize {
        let y = self.module.canonical(v);
        let mut idx = 0usize;
        for (x, &e) in y.iter().zip(self.module.invariants()) {
            idx = idx * e as usize + *x as usize;
        }
        idx
    }

    /// Brute-force closure check: sums and scalar multiples stay in the list.
    pub fn is_closed(&self) -> bool {
        let ring = self.module.ring();
        let n = ring.modulus();
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        for (i, v) in self.elements.iter().enumerate() {
            if seen.insert(self.module.canonical(v), i).is_some() {
                return false;
            }
        }
        for a in &self.elements {
            for b in &self.elements {
                let s: Vec<u64> = a.iter().zip(b).map(|(x, y)| ring.add(*x, *y)).collect();
                if !seen.contains_key(&self.module.canonical(&s)) {
                    return false;
                }
            }
            for c in 0..n {
                let s: Vec<u64> = a.iter().map(|x| ring.mul(*x, c)).collect();
                if !seen.contains_key(&self.module.canonical(&s)) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Matrix, Ring};

    #[test]
    fn table_is_closed_and_indexed() {
        let r = Ring::new(12).unwrap();
        let m = FPModule::new(Matrix::from_rows(r, &[vec![4, 6], vec![2, 3]]).unwrap());
        let t = m.elements().unwrap();
        assert_eq!(t.len() as u128, m.cardinality());
        assert!(t.is_closed());
        for (i, v) in t.elements().iter().enumerate() {
            assert_eq!(t.index_of(v), i);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let r = Ring::new(16).unwrap();
        let m = FPModule::free(r, 4);
        assert!(matches!(ElementTable::new(&m, 4096), Err(Error::TooLarge(65536, 4096))));
    }
}
