//! Dense 0/1 adjacency matrices, Cayley graphs and the graph operations used
//! to relate them: complement, Kronecker product, connected components.

use std::collections::VecDeque;

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::ideal::GeneratorContext;
use crate::ring::{max_order, Elem, ElementSubset, LocalFactorization, RingTable};

/// Symmetric 0/1 matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AdjacencyMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    allows_loops: bool,
}

impl AdjacencyMatrix {
    pub fn empty(n: usize, allows_loops: bool) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, bits: vec![0; n * words], allows_loops }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::empty(n, true);
        for i in 0..n {
            a.set(i, i);
        }
        a
    }

    pub fn complete(n: usize) -> Self {
        let mut a = Self::empty(n, false);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    a.set(i, j);
                }
            }
        }
        a
    }

    /// Builds a matrix from an edge list (each pair set symmetrically).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let loops = edges.iter().any(|&(u, v)| u == v);
        let mut a = Self::empty(n, loops);
        for &(u, v) in edges {
            a.set(u, v);
            a.set(v, u);
        }
        a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn allows_loops(&self) -> bool {
        self.allows_loops
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(i, j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|i| self.get(i, i))
    }

    /// Number of ones on the diagonal.
    pub fn trace(&self) -> usize {
        (0..self.n).filter(|&i| self.get(i, i)).count()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Undirected edges `(u, v)` with `u < v`, loops excluded.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    /// Row-major `f64` copy of the principal submatrix on `vertices`.
    pub fn dense_submatrix(&self, vertices: &[usize]) -> Vec<f64> {
        let k = vertices.len();
        let mut out = vec![0.0; k * k];
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate() {
                if self.get(u, v) {
                    out[a * k + b] = 1.0;
                }
            }
        }
        out
    }

    /// Vertex relabelling `v ↦ perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::empty(self.n, self.allows_loops);
        for u in 0..self.n {
            for v in self.neighbors(u) {
                out.set(perm[u], perm[v]);
            }
        }
        out
    }
}

impl std::fmt::Debug for AdjacencyMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "AdjacencyMatrix(n={})", self.n)?;
        for i in 0..self.n.min(32) {
            let row: String = (0..self.n.min(64)).map(|j| if self.get(i, j) { '1' } else { '.' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// `a_uv = 1` iff `u − v ∈ S`. Loops appear exactly when `0 ∈ S`.
pub fn cayley_graph(ring: &RingTable, connection: &ElementSubset) -> Result<AdjacencyMatrix> {
    if connection.iter().any(|s| s >= ring.order()) {
        return Err(Error::ElementOutOfRange { index: connection.iter().max().unwrap_or(0), order: ring.order() });
    }
    if connection.iter().any(|s| !connection.contains(ring.neg(s))) {
        return Err(Error::AsymmetricConnectionSet);
    }
    let n = ring.order();
    if n > max_order() {
        return Err(Error::GraphTooLarge(n));
    }
    let mut a = AdjacencyMatrix::empty(n, connection.contains(ring.zero()));
    for u in 0..n {
        for s in connection.iter() {
            // u − v = s  ⟺  v = u − s
            a.set(u, ring.sub(u, s));
        }
    }
    Ok(a)
}

/// `Cay(R, xR*)` for nonzero `x`; loopless by construction.
pub fn unit_orbit_graph(ctx: &GeneratorContext<'_>) -> Result<AdjacencyMatrix> {
    let a = cayley_graph(ctx.ring, &ctx.orbit)?;
    if a.has_loops() {
        return Err(Error::HasLoops);
    }
    Ok(a)
}

/// `Cay(R_i, x_iR_i*)` for a local factor; the identity matrix when `x_i = 0`.
pub fn factor_graph(ring: &RingTable, xi: Elem) -> Result<AdjacencyMatrix> {
    let orbit = ring.scale(xi, ring.units()?);
    cayley_graph(ring, &orbit)
}

/// Common degree of every vertex, if there is one.
pub fn is_regular(a: &AdjacencyMatrix) -> Option<usize> {
    let k = if a.n() == 0 { 0 } else { a.degree(0) };
    (0..a.n()).all(|i| a.degree(i) == k).then_some(k)
}

/// Kronecker product; vertex `(i, j)` is `i·|B| + j`.
pub fn tensor_product(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> Result<AdjacencyMatrix> {
    let n = a.n().checked_mul(b.n()).ok_or(Error::GraphTooLarge(usize::MAX))?;
    if n > max_order() {
        return Err(Error::GraphTooLarge(n));
    }
    let mut out = AdjacencyMatrix::empty(n, a.allows_loops() || b.allows_loops());
    for i in 0..a.n() {
        for k in a.neighbors(i) {
            for j in 0..b.n() {
                for l in b.neighbors(j) {
                    out.set(i * b.n() + j, k * b.n() + l);
                }
            }
        }
    }
    Ok(out)
}

/// Connected components by breadth-first search, loops ignored. Each
/// component is sorted and components are ordered by their least vertex.
pub fn components(a: &AdjacencyMatrix) -> Vec<Vec<usize>> {
    let mut seen = vec![false; a.n()];
    let mut out = Vec::new();
    for start in 0..a.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in a.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Loopless complement: distinct vertices are adjacent iff they were not.
pub fn complement(a: &AdjacencyMatrix) -> Result<AdjacencyMatrix> {
    if a.has_loops() {
        return Err(Error::HasLoops);
    }
    let mut out = AdjacencyMatrix::empty(a.n(), false);
    for i in 0..a.n() {
        for w in 0..a.words {
            out.bits[i * a.words + w] = !a.bits[i * a.words + w];
        }
        // clear the diagonal and the padding past column n
        out.bits[i * a.words + i / 64] &= !(1u64 << (i % 64));
        let tail = a.n() % 64;
        if tail != 0 {
            out.bits[i * a.words + a.words - 1] &= (1u64 << tail) - 1;
        }
    }
    Ok(out)
}

/// For a local ring: each component of `Cay(R, xR*)` is a coset `z + I_x`,
/// split into parts `z + a + M_x` with no edges inside a part and all edges
/// between parts; and each component is a translate of `Cay(I_x, xR*)`.
pub fn multipartite_check(ctx: &GeneratorContext<'_>) -> Result<CheckReport> {
    let r = ctx.ring;
    r.is_local()?.ok_or(Error::NotLocal)?;
    let a = unit_orbit_graph(ctx)?;
    let comps = components(&a);
    let mut rep = CheckReport::new();

    let cosets_ok = comps.iter().all(|c| {
        let z = c[0];
        let coset: ElementSubset = ctx.ideal.iter().map(|i| r.add(z, i)).collect();
        coset.as_slice() == c.as_slice()
    });
    rep.expect("components_are_ideal_cosets", cosets_ok, || "a component is not z + I_x".into());
    rep.expect("component_count", comps.len() * ctx.ideal.len() == r.order(), || {
        format!("{} components, |R|/|I_x| = {}", comps.len(), r.order() / ctx.ideal.len())
    });

    let mut partite_ok = true;
    for c in &comps {
        for &u in c {
            for &v in c {
                let same_part = ctx.boundary.contains(r.sub(u, v));
                if u != v && a.get(u, v) == same_part {
                    partite_ok = false;
                }
            }
        }
    }
    rep.expect("components_complete_multipartite_on_boundary_cosets", partite_ok, || {
        "edge pattern inside a component does not match the M_x-coset partition".into()
    });

    let base = cayley_graph(r, &ctx.orbit)?;
    let ideal_vs: Vec<usize> = ctx.ideal.iter().collect();
    let translate_ok = comps.iter().all(|c| {
        let z = c[0];
        ideal_vs.iter().all(|&i| ideal_vs.iter().all(|&j| base.get(i, j) == a.get(r.add(z, i), r.add(z, j))))
    });
    rep.expect("components_translate_ideal_graph", translate_ok, || {
        "a component is not the translate of Cay(I_x, xR*)".into()
    });
    Ok(rep)
}

/// Checks that `Cay(R, xR*)` equals `⊗_i Cay(R_i, x_iR_i*)` entrywise once
/// vertices are relabelled by their coordinate codes.
pub fn tensor_factorization_check(
    ring: &RingTable,
    fact: &LocalFactorization,
    ctx: &GeneratorContext<'_>,
) -> Result<bool> {
    let direct = unit_orbit_graph(ctx)?;
    let coords = fact.coords(ctx.x);
    let mut product: Option<AdjacencyMatrix> = None;
    for (f, &xi) in fact.factors.iter().zip(&coords) {
        let g = factor_graph(&f.ring, xi)?;
        product = Some(match product {
            None => g,
            Some(p) => tensor_product(&p, &g)?,
        });
    }
    let product = product.ok_or(Error::EmptyProfile)?;
    let perm: Vec<usize> = ring.elements().map(|e| fact.embedding.code(e)).collect();
    let relabelled = direct.permuted(&perm);
    Ok((0..ring.order()).all(|u| (0..ring.order()).all(|v| relabelled.get(u, v) == product.get(u, v))))
}
