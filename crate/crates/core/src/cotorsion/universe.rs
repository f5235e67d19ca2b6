use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec::Exec;
use crate::bifunctor::ext;
use crate::gen::nontrivial_divisors;
use crate::module::FPModule;
use crate::ring::Ring;

/// A finite list of pairwise non-isomorphic modules standing in for all
/// objects.
#[derive(Clone, Debug)]
pub struct Universe {
    ring: Ring,
    max_factors: usize,
    modules: Vec<FPModule>,
    tables: OnceLock<ExtTables>,
}

/// `|Ext¹(uᵢ, uⱼ)|` and `|Ext²(uᵢ, uⱼ)|`, row `i` the first argument.
#[derive(Clone, Debug)]
pub struct ExtTables {
    pub ext1: Vec<Vec<u128>>,
    pub ext2: Vec<Vec<u128>>,
}

/// Universe parameters carried by every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseInfo {
    pub modulus: u64,
    pub max_factors: usize,
    pub size: usize,
}

fn multisets(items: &[u64], k: usize, start: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    out.push(cur.clone());
    if cur.len() == k {
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        multisets(items, k, i, cur, out);
        cur.pop();
    }
}

impl Universe {
    /// Every `⊕ Z/dᵢ` with at most `max_factors` summands, `1 < dᵢ | n`, up
    /// to isomorphism, in normal form. Ordered by number of invariant
    /// factors, then invariants.
    pub fn enumerate(ring: Ring, max_factors: usize) -> Universe {
        let divs = nontrivial_divisors(ring);
        let mut lists = Vec::new();
        multisets(&divs, max_factors, 0, &mut Vec::new(), &mut lists);
        let mut modules: Vec<FPModule> = lists
            .iter()
            .map(|ds| FPModule::from_invariants(ring, ds).expect("divisors").normalized().0)
            .collect();
        modules.sort_by(|a, b| {
            (a.invariants().len(), a.invariants()).cmp(&(b.invariants().len(), b.invariants()))
        });
        modules.dedup_by(|a, b| a.invariants() == b.invariants());
        Universe {
            ring,
            max_factors,
            modules,
            tables: OnceLock::new(),
        }
    }

    /// A universe from an explicit list; see [`Universe::validate`].
    pub fn from_modules(ring: Ring, modules: Vec<FPModule>) -> Universe {
        let max_factors = modules.iter().map(|m| m.invariants().len()).max().unwrap_or(0);
        Universe {
            ring,
            max_factors,
            modules,
            tables: OnceLock::new(),
        }
    }

    /// A universe must contain `0` and the free module of rank one, with
    /// every member over the right ring and no two members isomorphic.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if let Some(m) = self.modules.iter().find(|m| m.ring() != self.ring) {
            return Err(format!("{m} is not over Z/{}", self.ring.modulus()));
        }
        if !self.modules.iter().any(FPModule::is_zero) {
            return Err("universe lacks the zero module".into());
        }
        let n = self.ring.modulus();
        if !self.modules.iter().any(|m| m.invariants() == [n]) {
            return Err("universe lacks the free module of rank one".into());
        }
        for (i, a) in self.modules.iter().enumerate() {
            if self.modules[..i].iter().any(|b| a.invariants() == b.invariants()) {
                return Err(format!("{a} is listed twice"));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn max_factors(&self) -> usize {
        self.max_factors
    }

    pub fn modules(&self) -> &[FPModule] {
        &self.modules
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn info(&self) -> UniverseInfo {
        UniverseInfo {
            modulus: self.ring.modulus(),
            max_factors: self.max_factors,
            size: self.modules.len(),
        }
    }

    /// Position of the member isomorphic to `m`.
    pub fn index_of(&self, m: &FPModule) -> Option<usize> {
        if m.ring() != self.ring {
            return None;
        }
        self.modules.iter().position(|x| x.invariants() == m.invariants())
    }

    /// Ext tables over all ordered pairs, computed once.
    pub fn ext_tables(&self, exec: Exec) -> Result<&ExtTables> {
        if let Some(t) = self.tables.get() {
            return Ok(t);
        }
        let k = self.modules.len();
        let cells = exec.map_range(k * k, |c| -> Result<(u128, u128)> {
            let (a, b) = (&self.modules[c / k], &self.modules[c % k]);
            Ok((ext(1, a, b)?.cardinality(), ext(2, a, b)?.cardinality()))
        });
        let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
        let rows = |pick: fn(&(u128, u128)) -> u128| -> Vec<Vec<u128>> {
            cells.chunks(k.max(1)).map(|r| r.iter().map(pick).collect()).collect()
        };
        let tables = ExtTables {
            ext1: rows(|c| c.0),
            ext2: rows(|c| c.1),
        };
        Ok(self.tables.get_or_init(|| tables))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    fn invariants(u: &Universe) -> Vec<Vec<u64>> {
        u.modules().iter().map(|m| m.invariants().to_vec()).collect()
    }

    #[test]
    fn small_universes() {
        assert_eq!(invariants(&Universe::enumerate(z(4), 1)), vec![vec![], vec![2], vec![4]]);
        assert_eq!(
            invariants(&Universe::enumerate(z(12), 1)),
            vec![vec![], vec![2], vec![3], vec![4], vec![6], vec![12]]
        );
        assert_eq!(invariants(&Universe::enumerate(z(7), 0)), vec![Vec::<u64>::new()]);
        assert_eq!(Universe::enumerate(z(12), 2).len(), 18);
        assert_eq!(Universe::enumerate(z(4), 2).len(), 6);
    }

    #[test]
    fn validation() {
        let r = z(4);
        assert!(Universe::enumerate(r, 2).validate().is_ok());
        let missing = Universe::from_modules(r, vec![FPModule::zero(r), FPModule::cyclic(r, 2).unwrap()]);
        assert!(missing.validate().unwrap_err().contains("free"));
        let twice = Universe::from_modules(r, vec![FPModule::zero(r), FPModule::free(r, 1), FPModule::free(r, 1)]);
        assert!(twice.validate().is_err());
    }

    #[test]
    fn ext_table_over_z4() {
        let u = Universe::enumerate(z(4), 1);
        let t = u.ext_tables(Exec::Sequential).unwrap();
        // Rows and columns: 0, Z/2, Z/4.
        assert_eq!(t.ext1, vec![vec![1, 1, 1], vec![1, 2, 1], vec![1, 1, 1]]);
        assert_eq!(t.ext2[1][1], 2);
    }
}
