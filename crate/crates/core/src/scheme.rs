//! The group association scheme: one relation `R_i = {(x, y) : y x^-1 in Cl_i}`
//! per conjugacy class, its intersection numbers, and the `T0` triple count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CayleyTable, ClassKind, ClassPartition, ConjugacyData};

/// Sparse 0/1 adjacency matrices of the scheme, one per class, in the class
/// order of the partition they were built from.
#[derive(Debug, Clone)]
pub struct SchemeMatrices {
    order: usize,
    /// `adjacency[i][x]` is the sorted column set of row `x` of `A_i`.
    adjacency: Vec<Vec<Vec<u32>>>,
    class_of: Vec<usize>,
    identity_class: usize,
}

impl SchemeMatrices {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn relation_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn identity_class(&self) -> usize {
        self.identity_class
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn row(&self, i: usize, x: usize) -> &[u32] {
        &self.adjacency[i][x]
    }

    pub fn entry(&self, i: usize, x: usize, y: usize) -> bool {
        self.adjacency[i][x].binary_search(&(y as u32)).is_ok()
    }

    /// Row-major positions `x * |G| + y` of the ones of `A_i`, ascending.
    pub fn support(&self, i: usize) -> Vec<usize> {
        let n = self.order;
        self.adjacency[i]
            .iter()
            .enumerate()
            .flat_map(|(x, cols)| cols.iter().map(move |&y| x * n + y as usize))
            .collect()
    }

    pub fn to_dense(&self, i: usize) -> Vec<u64> {
        let n = self.order;
        let mut m = vec![0u64; n * n];
        for p in self.support(i) {
            m[p] = 1;
        }
        m
    }
}

/// Builds `A_0..A_t` and verifies the identity, partition and transpose axioms.
pub fn build_scheme(table: &CayleyTable, classes: &ClassPartition) -> Result<SchemeMatrices> {
    let n = table.order();
    if classes.order() != n {
        return Err(Error::SchemeAxiom(format!("partition covers {} elements, group has {n}", classes.order())));
    }
    // Row x of A_i holds y = c x for c in Cl_i.
    let adjacency: Vec<Vec<Vec<u32>>> = classes
        .classes()
        .iter()
        .map(|class| {
            (0..n)
                .map(|x| {
                    let mut cols: Vec<u32> = class.iter().map(|&c| table.mul(c, x) as u32).collect();
                    cols.sort_unstable();
                    cols
                })
                .collect()
        })
        .collect();
    let class_of = (0..n).map(|x| classes.class_of(x)).collect();
    let scheme = SchemeMatrices { order: n, adjacency, class_of, identity_class: classes.class_of(table.identity()) };
    verify_axioms(&scheme, table, classes)?;
    Ok(scheme)
}

fn verify_axioms(scheme: &SchemeMatrices, table: &CayleyTable, classes: &ClassPartition) -> Result<()> {
    let n = scheme.order;
    let id = scheme.identity_class;
    if classes.class(id).len() != 1 {
        return Err(Error::SchemeAxiom("identity class is not a singleton".into()));
    }
    for x in 0..n {
        if scheme.row(id, x) != [x as u32] {
            return Err(Error::SchemeAxiom(format!("A_{id} is not the identity at row {x}")));
        }
    }
    // Partition of J: every (x, y) lies in exactly one relation.
    let mut hits = vec![0u8; n * n];
    for i in 0..scheme.relation_count() {
        for x in 0..n {
            let row = scheme.row(i, x);
            if row.len() != classes.class(i).len() || row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::SchemeAxiom(format!("A_{i} row {x} does not have sum |Cl_{i}|")));
            }
            for &y in row {
                hits[x * n + y as usize] += 1;
            }
        }
    }
    if hits.iter().any(|&h| h != 1) {
        return Err(Error::SchemeAxiom("relations do not partition G x G".into()));
    }
    // A_i^T = A_{i'} with Cl_{i'} = Cl_i^-1.
    for i in 0..scheme.relation_count() {
        let j = classes.inverse_class(table, i);
        for x in 0..n {
            for &y in scheme.row(i, x) {
                if !scheme.entry(j, y as usize, x) {
                    return Err(Error::SchemeAxiom(format!("A_{i}^T is not A_{j}")));
                }
            }
        }
    }
    Ok(())
}

/// Nonzero intersection numbers `p_ijk`, stored sparsely in `(i, j, k)` order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTensor {
    classes: usize,
    entries: Vec<((u32, u32, u32), u64)>,
}

impl IntersectionTensor {
    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        let key = (i as u32, j as u32, k as u32);
        self.entries.binary_search_by(|e| e.0.cmp(&key)).map(|p| self.entries[p].1).unwrap_or(0)
    }

    /// Nonzero entries `((i, j, k), p_ijk)`, sorted.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        self.entries.iter().map(|&((i, j, k), v)| (i as usize, j as usize, k as usize, v))
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    /// CSV rows `i,j,k,p_ijk` for nonzero entries, with header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,k,p_ijk\n");
        for (i, j, k, v) in self.nonzero() {
            out.push_str(&format!("{i},{j},{k},{v}\n"));
        }
        out
    }
}

/// Counts `z in Cl_i` with `y z^-1 in Cl_j` for base point `(x, y)`, with `x` the
/// identity. Returns the per-`(i, j)` counts for the class of `y`.
fn counts_from(table: &CayleyTable, classes: &ClassPartition, y: usize) -> Vec<((u32, u32), u64)> {
    let mut counts: Vec<((u32, u32), u64)> = Vec::new();
    for (i, class) in classes.classes().iter().enumerate() {
        let start = counts.len();
        for &z in class {
            let j = classes.class_of(table.mul(y, table.inv(z))) as u32;
            match counts[start..].iter_mut().find(|c| c.0 .1 == j) {
                Some(c) => c.1 += 1,
                None => counts.push(((i as u32, j), 1)),
            }
        }
        counts[start..].sort_unstable();
    }
    counts
}

/// Intersection numbers from one representative per class, rechecked with a
/// second representative whenever the class has more than one element.
pub fn intersection_numbers(table: &CayleyTable, classes: &ClassPartition) -> Result<IntersectionTensor> {
    let t = classes.len();
    let mut entries = Vec::new();
    for k in 0..t {
        let class = classes.class(k);
        let counts = counts_from(table, classes, class[0]);
        if class.len() > 1 {
            let again = counts_from(table, classes, class[class.len() - 1]);
            if again != counts {
                return Err(Error::SchemeAxiom(format!("p_ij{k} depends on the choice of base pair")));
            }
        }
        entries.extend(counts.into_iter().map(|((i, j), v)| ((i, j, k as u32), v)));
    }
    entries.sort_unstable();
    Ok(IntersectionTensor { classes: t, entries })
}

/// `p_ijk` computed directly from an arbitrary base pair `(x, y) in R_k`.
pub fn intersection_number_at(scheme: &SchemeMatrices, i: usize, j: usize, x: usize, y: usize) -> u64 {
    // z with (x, z) in R_i and (z, y) in R_j
    scheme.row(i, x).iter().filter(|&&z| scheme.entry(j, z as usize, y)).count() as u64
}

/// Checks `A_i A_j = sum_k p_ijk A_k` as a full matrix identity.
pub fn verify_product_identity(scheme: &SchemeMatrices, tensor: &IntersectionTensor) -> bool {
    let n = scheme.order();
    let t = scheme.relation_count();
    let mut by_ij = vec![Vec::new(); t * t];
    for (i, j, k, v) in tensor.nonzero() {
        by_ij[i * t + j].push((k, v));
    }
    let mut row = vec![0u64; n];
    for i in 0..t {
        for j in 0..t {
            for x in 0..n {
                row.iter_mut().for_each(|r| *r = 0);
                for &z in scheme.row(i, x) {
                    for &y in scheme.row(j, z as usize) {
                        row[y as usize] += 1;
                    }
                }
                for (y, &value) in row.iter().enumerate() {
                    let rel = table_rel(scheme, x, y);
                    let expected = by_ij[i * t + j].iter().find(|&&(k, _)| k == rel).map_or(0, |&(_, v)| v);
                    if value != expected {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The relation containing `(x, y)`.
fn table_rel(scheme: &SchemeMatrices, x: usize, y: usize) -> usize {
    (0..scheme.relation_count()).find(|&i| scheme.entry(i, x, y)).expect("relations partition G x G")
}

/// `dim T0`: the number of triples with `p_ijk != 0`.
pub fn dim_t0(tensor: &IntersectionTensor) -> u64 {
    tensor.nonzero_count() as u64
}

/// Nonzero triple counts split by the kinds of `(Cl_i, Cl_j)`, in the order
/// `XX, XY, YX, XZ, ZX, YY, YZ, ZY, ZZ`.
pub fn case_counts(tensor: &IntersectionTensor, classes: &ConjugacyData) -> [u64; 9] {
    use ClassKind::*;
    const CASES: [(ClassKind, ClassKind); 9] = [(X, X), (X, Y), (Y, X), (X, Z), (Z, X), (Y, Y), (Y, Z), (Z, Y), (Z, Z)];
    let mut out = [0u64; 9];
    for (i, j, _, _) in tensor.nonzero() {
        let key = (classes.labels[i].kind, classes.labels[j].kind);
        let case = CASES.iter().position(|&c| c == key).expect("all kind pairs are covered");
        out[case] += 1;
    }
    out
}

/// The per-case counts `tau^2, tau m, tau m, tau^2, tau^2, 2 m^2, tau m, tau m,
/// tau (tau + m)` with `m = (n - tau) / 2`.
pub fn expected_case_counts(n: u64, tau: u64) -> [u64; 9] {
    let m = (n - tau) / 2;
    let tt = tau * tau;
    let tm = tau * m;
    [tt, tm, tm, tt, tt, 2 * m * m, tm, tm, tau * (tau + m)]
}
