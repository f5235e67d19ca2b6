//! Independent brute-force oracles over explicit finite abelian groups.
#![allow(dead_code)]

/// `⊕ Z/dᵢ` as tuples with componentwise arithmetic.
#[derive(Clone, Debug)]
pub struct Group {
    pub moduli: Vec<u64>,
}

impl Group {
    pub fn new(moduli: &[u64]) -> Group {
        Group {
            moduli: moduli.to_vec(),
        }
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product::<u64>() as usize
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut v = vec![0; self.moduli.len()];
        for i in (0..v.len()).rev() {
            let d = self.moduli[i] as usize;
            v[i] = (idx % d) as u64;
            idx /= d;
        }
        v
    }

    pub fn index(&self, v: &[u64]) -> usize {
        v.iter()
            .zip(&self.moduli)
            .fold(0, |acc, (x, d)| acc * *d as usize + (*x % d) as usize)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.element(x), self.element(y));
        let s: Vec<u64> = a.iter().zip(&b).zip(&self.moduli).map(|((p, q), d)| (p + q) % d).collect();
        self.index(&s)
    }

    pub fn neg(&self, x: usize) -> usize {
        let a = self.element(x);
        let s: Vec<u64> = a.iter().zip(&self.moduli).map(|(p, d)| (d - p) % d).collect();
        self.index(&s)
    }
}

/// Number of extensions `0 → b → Y → a → 0` of abelian groups with
/// `n·Y = 0`, up to equivalence: normalized symmetric 2-cocycles
/// `a × a → b` satisfying the exponent condition, divided by coboundaries.
pub fn ext1_count(n: u64, a: &Group, b: &Group) -> usize {
    let (oa, ob) = (a.order(), b.order());
    let pairs: Vec<(usize, usize)> = (1..oa).flat_map(|x| (x..oa).map(move |y| (x, y))).collect();
    let slot = |x: usize, y: usize| -> Option<usize> {
        if x == 0 || y == 0 {
            return None;
        }
        let (p, q) = if x <= y { (x, y) } else { (y, x) };
        pairs.iter().position(|&e| e == (p, q))
    };
    let eval = |f: &[usize], x: usize, y: usize| slot(x, y).map_or(0, |k| f[k]);
    let is_cocycle = |f: &[usize]| -> bool {
        for x in 0..oa {
            for y in 0..oa {
                for z in 0..oa {
                    let lhs = b.add(eval(f, x, y), eval(f, a.add(x, y), z));
                    let rhs = b.add(eval(f, y, z), eval(f, x, a.add(y, z)));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        // n · (0, x) = 0 in Y.
        (0..oa).all(|x| {
            let (mut acc, mut kx) = (0, x);
            for _ in 1..n {
                acc = b.add(acc, eval(f, kx, x));
                kx = a.add(kx, x);
            }
            acc == 0
        })
    };
    let mut cocycles = 0usize;
    let total = ob.pow(pairs.len() as u32);
    let mut f = vec![0usize; pairs.len()];
    for code in 0..total {
        let mut c = code;
        for v in f.iter_mut() {
            *v = c % ob;
            c /= ob;
        }
        if is_cocycle(&f) {
            cocycles += 1;
        }
    }
    let mut coboundaries = std::collections::HashSet::new();
    let gs = ob.pow(oa.saturating_sub(1) as u32);
    for code in 0..gs {
        let mut c = code;
        let mut g = vec![0usize; oa];
        for v in g.iter_mut().skip(1) {
            *v = c % ob;
            c /= ob;
        }
        let cob: Vec<usize> = pairs
            .iter()
            .map(|&(x, y)| b.add(b.add(g[x], g[y]), b.neg(g[a.add(x, y)])))
            .collect();
        coboundaries.insert(cob);
    }
    cocycles / coboundaries.len()
}

/// Number of bilinear maps `a × b → Z/n`, found by assigning values on
/// generator pairs and testing every pair of representatives.
pub fn bilinear_count(n: u64, a: &Group, b: &Group) -> usize {
    let (ka, kb) = (a.moduli.len(), b.moduli.len());
    let cells = ka * kb;
    let total = (n as usize).pow(cells as u32);
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let t: Vec<u64> = (0..cells)
            .map(|_| {
                let v = (c % n as usize) as u64;
                c /= n as usize;
                v
            })
            .collect();
        let value = |x: &[u64], y: &[u64]| -> u64 {
            let mut s = 0;
            for i in 0..ka {
                for j in 0..kb {
                    s = (s + x[i] * y[j] % n * t[i * kb + j]) % n;
                }
            }
            s
        };
        // Shifting a representative by its modulus must not change the value.
        let ok = (0..a.order()).all(|xi| {
            let x = a.element(xi);
            (0..b.order()).all(|yi| {
                let y = b.element(yi);
                let base = value(&x, &y);
                (0..ka).all(|i| {
                    let mut x2 = x.clone();
                    x2[i] += a.moduli[i];
                    value(&x2, &y) == base
                }) && (0..kb).all(|j| {
                    let mut y2 = y.clone();
                    y2[j] += b.moduli[j];
                    value(&x, &y2) == base
                })
            })
        });
        if ok {
            count += 1;
        }
    }
    count
}

/// Finite Z/4-modules with at most four elements, by invariant factors.
pub fn small_z4_groups() -> Vec<Vec<u64>> {
    vec![vec![], vec![2], vec![4], vec![2, 2]]
}
