use serde::{Deserialize, Serialize};

use super::limits::embed;
use super::{FPModule, Morphism};
use crate::error::{Error, Result};
use crate::ring::Matrix;

/// Hard limit on cube arity.
pub const MAX_ARITY: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Puncture {
    None,
    AllOnes,
    AllZeros,
}

/// A commuting `n`-cube of modules indexed by bitmasks.
///
/// Bit `i` of a vertex index is the `i`-th coordinate. The edge `(v, i)`
/// exists for every `v` with bit `i` clear and goes `v → v | 1 << i`. A
/// punctured vertex and the edges touching it are absent.
#[derive(Clone, Debug)]
pub struct CubeDiagram {
    arity: usize,
    puncture: Puncture,
    vertices: Vec<Option<FPModule>>,
    edges: Vec<Vec<Option<Morphism>>>,
}

/// A colimit or limit over a punctured cube together with its structure maps
/// and the comparison map to or from the removed vertex when it is known.
#[derive(Clone, Debug)]
pub struct CubeCone {
    pub module: FPModule,
    /// `legs[v]` is `V_v → colim` (or `lim → V_v`); `None` at the puncture.
    pub legs: Vec<Option<Morphism>>,
    pub comparison: Option<Morphism>,
}

impl CubeDiagram {
    /// Builds a cube by calling `vertex` on every present vertex and `edge`
    /// on every present edge, then checks the faces commute.
    pub fn from_fn<V, E>(arity: usize, puncture: Puncture, mut vertex: V, mut edge: E) -> Result<Self>
    where
        V: FnMut(usize) -> Result<FPModule>,
        E: FnMut(usize, usize) -> Result<Morphism>,
    {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::InvalidArgument(format!(
                "cube arity {arity} outside 1..={MAX_ARITY}"
            )));
        }
        let size = 1usize << arity;
        let full = size - 1;
        let present = |v: usize| match puncture {
            Puncture::None => true,
            Puncture::AllOnes => v != full,
            Puncture::AllZeros => v != 0,
        };
        let mut vertices = Vec::with_capacity(size);
        for v in 0..size {
            vertices.push(if present(v) { Some(vertex(v)?) } else { None });
        }
        let mut edges = vec![vec![None; arity]; size];
        for v in 0..size {
            for (i, slot) in edges[v].iter_mut().enumerate() {
                let w = v | (1 << i);
                if v & (1 << i) != 0 || !present(v) || !present(w) {
                    continue;
                }
                let e = edge(v, i)?;
                let (src, tgt) = (vertices[v].as_ref().unwrap(), vertices[w].as_ref().unwrap());
                if !e.source().same(src) || !e.target().same(tgt) {
                    return Err(Error::Shape(format!("edge ({v}, {i}) has the wrong endpoints")));
                }
                *slot = Some(e);
            }
        }
        let cube = CubeDiagram {
            arity,
            puncture,
            vertices,
            edges,
        };
        cube.check_commutes()?;
        Ok(cube)
    }

    fn check_commutes(&self) -> Result<()> {
        for v in 0..self.vertices.len() {
            for i in 0..self.arity {
                for j in i + 1..self.arity {
                    let (bi, bj) = (1 << i, 1 << j);
                    if v & (bi | bj) != 0 {
                        continue;
                    }
                    let legs = (
                        self.edge(v, i),
                        self.edge(v | bi, j),
                        self.edge(v, j),
                        self.edge(v | bj, i),
                    );
                    if let (Some(a), Some(b), Some(c), Some(d)) = legs {
                        if !a.then(b)?.equals(&c.then(d)?)? {
                            return Err(Error::NonCommuting(format!(
                                "face at vertex {v} in directions {i}, {j}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn puncture(&self) -> Puncture {
        self.puncture
    }

    pub fn vertex(&self, v: usize) -> Option<&FPModule> {
        self.vertices[v].as_ref()
    }

    pub fn edge(&self, v: usize, i: usize) -> Option<&Morphism> {
        self.edges[v][i].as_ref()
    }

    /// Composite of edges from `v` up to `w ⊇ v`, flipping bits low to high.
    pub fn path(&self, v: usize, w: usize) -> Result<Morphism> {
        if v & !w != 0 {
            return Err(Error::InvalidArgument(format!("{w:b} does not contain {v:b}")));
        }
        let start = self
            .vertex(v)
            .ok_or_else(|| Error::InvalidArgument("path starts at the puncture".into()))?;
        let mut acc = Morphism::identity(start);
        let mut cur = v;
        for i in 0..self.arity {
            if w & (1 << i) != 0 && cur & (1 << i) == 0 {
                let e = self
                    .edge(cur, i)
                    .ok_or_else(|| Error::InvalidArgument("path crosses the puncture".into()))?;
                acc = acc.then(e)?;
                cur |= 1 << i;
            }
        }
        Ok(acc)
    }

    fn full(&self) -> usize {
        (1 << self.arity) - 1
    }

    /// Colimit over every vertex except all-ones, presented as the cokernel
    /// of the coequalizer rows `ι_v(x) − ι_w(e(x))` on `⊕ V_v`. When the
    /// all-ones vertex is present the comparison map into it is included.
    pub fn punctured_colimit(&self) -> Result<CubeCone> {
        if self.puncture == Puncture::AllZeros {
            return Err(Error::InvalidArgument("colimit needs the all-zeros vertex".into()));
        }
        let full = self.full();
        let ring = self.vertices[0].as_ref().unwrap().ring();
        let idx: Vec<usize> = (0..full).collect();
        let mut offsets = vec![0usize; full + 1];
        for &v in &idx {
            offsets[v + 1] = offsets[v] + self.vertices[v].as_ref().unwrap().num_gens();
        }
        let total = offsets[full];
        let pres: Vec<&Matrix> = idx
            .iter()
            .map(|&v| self.vertices[v].as_ref().unwrap().presentation())
            .collect();
        let mut rel = Matrix::block_diag(&pres, ring);
        for &v in &idx {
            for i in 0..self.arity {
                let w = v | (1 << i);
                if w == v || w == full {
                    continue;
                }
                let e = self.edge(v, i).unwrap();
                let g = e.source().num_gens();
                let mut block = Matrix::zeros(ring, g, total);
                block.set_block(0, offsets[v], &Matrix::identity(ring, g));
                block.set_block(0, offsets[w], &e.matrix().neg());
                rel = rel.vstack(&block)?;
            }
        }
        let module = FPModule::new(rel);
        let mut legs = vec![None; full + 1];
        for &v in &idx {
            let src = self.vertices[v].as_ref().unwrap();
            legs[v] = Some(Morphism::new_unchecked(
                src.clone(),
                module.clone(),
                embed(ring, src.num_gens(), total, offsets[v]),
            ));
        }
        let comparison = match &self.vertices[full] {
            Some(apex) => {
                let mut m = Matrix::zeros(ring, total, apex.num_gens());
                for &v in &idx {
                    m.set_block(offsets[v], 0, self.path(v, full)?.matrix());
                }
                Some(Morphism::new(module.clone(), apex.clone(), m)?)
            }
            None => None,
        };
        Ok(CubeCone {
            module,
            legs,
            comparison,
        })
    }

    /// Limit over every vertex except all-zeros, the kernel of
    /// `⊕ V_v → ⊕_{edges} V_w, (x_v) ↦ e(x_v) − x_w`. When the all-zeros
    /// vertex is present the comparison map out of it is included.
    pub fn punctured_limit(&self) -> Result<CubeCone> {
        if self.puncture == Puncture::AllOnes {
            return Err(Error::InvalidArgument("limit needs the all-ones vertex".into()));
        }
        let full = self.full();
        let ring = self.vertices[full].as_ref().unwrap().ring();
        let idx: Vec<usize> = (1..=full).collect();
        let vs: Vec<&FPModule> = idx.iter().map(|&v| self.vertices[v].as_ref().unwrap()).collect();
        let sum = FPModule::direct_sum(ring, &vs)?;
        let pos = |v: usize| v - 1;
        let mut edge_targets = Vec::new();
        let mut edge_list = Vec::new();
        for &v in &idx {
            for i in 0..self.arity {
                let w = v | (1 << i);
                if w != v {
                    edge_list.push((v, i, w));
                    edge_targets.push(self.vertices[w].as_ref().unwrap());
                }
            }
        }
        let codomain = FPModule::direct_sum(ring, &edge_targets)?;
        let mut m = Matrix::zeros(ring, sum.module.num_gens(), codomain.module.num_gens());
        let mut row_off = vec![0usize; idx.len() + 1];
        for (k, vm) in vs.iter().enumerate() {
            row_off[k + 1] = row_off[k] + vm.num_gens();
        }
        let mut col = 0usize;
        for &(v, i, w) in &edge_list {
            let e = self.edge(v, i).unwrap();
            m.set_block(row_off[pos(v)], col, e.matrix());
            let gw = self.vertices[w].as_ref().unwrap().num_gens();
            let neg_id = Matrix::scalar(ring, gw, ring.neg(1));
            m.set_block(row_off[pos(w)], col, &neg_id);
            col += gw;
        }
        let diff = Morphism::new_unchecked(sum.module.clone(), codomain.module, m);
        let (module, incl) = diff.kernel();
        let mut legs = vec![None; full + 1];
        for (k, &v) in idx.iter().enumerate() {
            legs[v] = Some(incl.then(&sum.projections[k])?);
        }
        let comparison = match &self.vertices[0] {
            Some(base) => {
                let mut to_sum = Matrix::zeros(ring, base.num_gens(), sum.module.num_gens());
                for (k, &v) in idx.iter().enumerate() {
                    to_sum.set_block(0, row_off[k], self.path(0, v)?.matrix());
                }
                let solver = incl.preimage_solver();
                let mut rows = Vec::with_capacity(base.num_gens());
                for r in 0..base.num_gens() {
                    rows.push(solver.solve(to_sum.row(r)).ok_or_else(|| {
                        Error::NonCommuting("base vertex does not map into the limit".into())
                    })?);
                }
                let mat = Matrix::from_residue_rows(ring, module.num_gens(), &rows);
                Some(Morphism::new(base.clone(), module.clone(), mat)?)
            }
            None => None,
        };
        Ok(CubeCone {
            module,
            legs,
            comparison,
        })
    }
}
