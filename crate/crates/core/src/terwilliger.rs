//! The Terwilliger algebra `T(e)` of a group association scheme: dual
//! idempotents, saturation of the generated matrix algebra, the centralizer
//! algebra bound, and the commutant oracle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CayleyTable, Orbitals};
use crate::linalg::{self, EchelonBasis, Field, PrimeField, Rationals, SparseVec};
use crate::scheme::SchemeMatrices;

/// Largest group order accepted by [`commutant_oracle`].
pub const COMMUTANT_MAX_ORDER: usize = 16;

/// Candidates computed per parallel batch during closure.
const BATCH: usize = 512;

/// Diagonal 0/1 matrices `E_i*` with `E_i*(u, u) = A_i(x, u)` for the base point `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualIdempotents {
    order: usize,
    /// Diagonal support of each `E_i*`, ascending.
    diagonals: Vec<Vec<usize>>,
}

impl DualIdempotents {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonals.is_empty()
    }

    pub fn diagonal(&self, i: usize) -> &[usize] {
        &self.diagonals[i]
    }

    pub fn trace(&self, i: usize) -> usize {
        self.diagonals[i].len()
    }

    /// Row-major positions of the ones of `E_i*`.
    pub fn support(&self, i: usize) -> Vec<usize> {
        self.diagonals[i].iter().map(|&u| u * self.order + u).collect()
    }

    /// `sum_i E_i* = I` and `E_i* E_j* = delta_ij E_i*`.
    pub fn verify(&self) -> bool {
        let mut hits = vec![0u32; self.order];
        for d in &self.diagonals {
            for &u in d {
                hits[u] += 1;
            }
        }
        // Diagonal 0/1 matrices whose supports partition the index set are
        // pairwise orthogonal idempotents summing to I.
        hits.iter().all(|&h| h == 1)
    }
}

pub fn dual_idempotents(scheme: &SchemeMatrices, base_point: usize) -> DualIdempotents {
    let diagonals =
        (0..scheme.relation_count()).map(|i| scheme.row(i, base_point).iter().map(|&u| u as usize).collect()).collect();
    DualIdempotents { order: scheme.order(), diagonals }
}

/// How candidate products are formed in each closure round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ClosureStrategy {
    /// New elements times every generator, on both sides.
    #[default]
    Generators,
    /// New elements times every element found so far, on both sides.
    FullBasis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureOptions {
    pub strategy: ClosureStrategy,
    /// Stop as soon as the rank reaches the supplied upper bound.
    pub early_exit: bool,
    pub max_rounds: usize,
    /// Permutation applied to the generator list before seeding.
    pub generator_order: Option<Vec<usize>>,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self { strategy: ClosureStrategy::Generators, early_exit: true, max_rounds: 64, generator_order: None }
    }
}

/// Outcome of one saturation run over one field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureRun {
    pub rank: usize,
    /// Completed multiplication rounds (seeding is round 0).
    pub rounds: usize,
    /// Rank after seeding and after each round.
    pub history: Vec<usize>,
    pub reached_bound: bool,
    pub saturated: bool,
}

/// Supports of the generators `A_0..A_t, E_0*..E_t*`, in that order.
pub fn generator_supports(scheme: &SchemeMatrices, idem: &DualIdempotents) -> Vec<Vec<usize>> {
    (0..scheme.relation_count()).map(|i| scheme.support(i)).chain((0..idem.len()).map(|i| idem.support(i))).collect()
}

/// Saturates the span of `generators` under multiplication.
///
/// Products are formed in a fixed order and inserted serially, so the basis,
/// round count and history do not depend on the number of worker threads.
pub fn saturate<F: Field>(
    field: &F,
    side: usize,
    generators: &[Vec<usize>],
    bound: Option<usize>,
    options: &ClosureOptions,
) -> Result<(EchelonBasis<F>, ClosureRun)> {
    let order: Vec<usize> = match &options.generator_order {
        Some(perm) => perm.clone(),
        None => (0..generators.len()).collect(),
    };
    let gens: Vec<SparseVec<F::Elem>> =
        order.iter().map(|&g| SparseVec::indicator(field, generators[g].iter().copied())).collect();
    let mut basis = EchelonBasis::new(field.clone(), side * side);
    let mut elements: Vec<SparseVec<F::Elem>> = Vec::new();
    let hit = |basis: &EchelonBasis<F>| options.early_exit && bound.is_some_and(|b| basis.rank() >= b);

    for g in &gens {
        let w = basis.reduce_sparse(g);
        if !w.is_zero() {
            basis.insert_reduced(w);
            elements.push(g.clone());
        }
    }
    let mut history = vec![basis.rank()];
    let mut frontier = 0..elements.len();
    let mut rounds = 0;
    let mut reached = hit(&basis);

    while !reached && !frontier.is_empty() {
        if rounds == options.max_rounds {
            return Err(Error::RoundBudgetExceeded(options.max_rounds));
        }
        rounds += 1;
        let partners: Vec<SparseVec<F::Elem>> = match options.strategy {
            ClosureStrategy::Generators => gens.clone(),
            ClosureStrategy::FullBasis => elements.clone(),
        };
        // Candidate (frontier index, partner index, side) in lexicographic order.
        let jobs: Vec<(usize, usize, bool)> = frontier
            .clone()
            .flat_map(|f| (0..partners.len()).flat_map(move |p| [(f, p, false), (f, p, true)]))
            .collect();
        let round_start = elements.len();
        'batches: for batch in jobs.chunks(BATCH) {
            let reduced: Vec<SparseVec<F::Elem>> = batch
                .par_iter()
                .map(|&(f, p, right)| {
                    let prod = if right {
                        linalg::mat_mul(field, side, &elements[f], &partners[p])
                    } else {
                        linalg::mat_mul(field, side, &partners[p], &elements[f])
                    };
                    basis.reduce_sparse(&prod)
                })
                .collect();
            for cand in reduced {
                if cand.is_zero() {
                    continue;
                }
                // Reduce again against rows inserted since the batch began.
                let w = basis.reduce_sparse(&cand);
                if w.is_zero() {
                    continue;
                }
                elements.push(w.clone());
                basis.insert_reduced(w);
                if hit(&basis) {
                    reached = true;
                    break 'batches;
                }
            }
        }
        history.push(basis.rank());
        frontier = round_start..elements.len();
        if let Some(b) = bound {
            if basis.rank() > b {
                return Err(Error::RouteDisagreement {
                    what: "closure rank",
                    detail: format!("rank {} exceeds the centralizer-algebra bound {b}", basis.rank()),
                });
            }
        }
    }
    let run = ClosureRun {
        rank: basis.rank(),
        rounds,
        history,
        reached_bound: reached,
        saturated: frontier.is_empty() || reached,
    };
    Ok((basis, run))
}

/// Whether the transpose of every basis row lies in the span.
pub fn transpose_closed<F: Field>(basis: &EchelonBasis<F>, side: usize) -> bool {
    basis.rows().par_iter().all(|row| basis.contains(&linalg::transpose(side, row)))
}

/// How `dim T` was pinned down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Modular rank met the centralizer-algebra upper bound.
    Exact,
    /// Saturated over the rationals.
    ExactRational,
    /// Both primes saturated with equal ranks below the upper bound.
    ModularTwoPrime,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Exact => "exact",
            Provenance::ExactRational => "exact_rational",
            Provenance::ModularTwoPrime => "modular_two_prime",
        }
    }
}

/// Result of the closure route together with both bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionCertificate {
    pub dim_t0: u64,
    pub dim_t: u64,
    pub provenance: Provenance,
    pub dim_t_tilde: u64,
    /// Closed-form value, when the group has one.
    pub formula: Option<u64>,
    pub triply_transitive: bool,
    pub closure_rounds: usize,
    pub basis_size_history: Vec<usize>,
    pub primes: [u64; 2],
}

impl DimensionCertificate {
    pub fn sandwich_holds(&self) -> bool {
        self.dim_t0 <= self.dim_t && self.dim_t <= self.dim_t_tilde
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateOptions {
    pub primes: [u64; 2],
    pub closure: ClosureOptions,
    /// Also saturate over the rationals and require the same rank.
    pub rational: bool,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        Self {
            primes: [linalg::DEFAULT_PRIME_1, linalg::DEFAULT_PRIME_2],
            closure: ClosureOptions::default(),
            rational: false,
        }
    }
}

/// Runs the closure over both primes (and optionally the rationals) and
/// assembles the certificate from the supplied lower and upper bounds.
pub fn algebra_closure(
    scheme: &SchemeMatrices,
    idem: &DualIdempotents,
    dim_t0: u64,
    dim_t_tilde: u64,
    formula: Option<u64>,
    options: &CertificateOptions,
) -> Result<DimensionCertificate> {
    let side = scheme.order();
    let generators = generator_supports(scheme, idem);
    let bound = Some(dim_t_tilde as usize);
    let mut runs = Vec::with_capacity(2);
    for &p in &options.primes {
        let field = PrimeField::new(p)?;
        let (_, run) = saturate(&field, side, &generators, bound, &options.closure)?;
        runs.push(run);
    }
    if runs[0] != runs[1] {
        return Err(Error::PrimeDisagreement(format!(
            "F_{}: rank {} history {:?}; F_{}: rank {} history {:?}",
            options.primes[0], runs[0].rank, runs[0].history, options.primes[1], runs[1].rank, runs[1].history
        )));
    }
    let run = runs.swap_remove(0);
    let mut provenance = if run.rank as u64 == dim_t_tilde { Provenance::Exact } else { Provenance::ModularTwoPrime };
    if options.rational {
        let (_, qrun) = saturate(&Rationals, side, &generators, bound, &options.closure)?;
        if qrun.rank != run.rank {
            return Err(Error::RouteDisagreement {
                what: "closure rank",
                detail: format!("rational rank {} vs modular rank {}", qrun.rank, run.rank),
            });
        }
        if provenance == Provenance::ModularTwoPrime && qrun.saturated {
            provenance = Provenance::ExactRational;
        }
    }
    let cert = DimensionCertificate {
        dim_t0,
        dim_t: run.rank as u64,
        provenance,
        dim_t_tilde,
        formula,
        triply_transitive: dim_t0 == dim_t_tilde,
        closure_rounds: run.rounds,
        basis_size_history: run.history,
        primes: options.primes,
    };
    if !cert.sandwich_holds() {
        return Err(Error::RouteDisagreement {
            what: "dimension sandwich",
            detail: format!("dim T0 = {}, dim T = {}, dim T~ = {}", cert.dim_t0, cert.dim_t, cert.dim_t_tilde),
        });
    }
    Ok(cert)
}

/// `dim T0 = dim T~`: the lower and upper bounds coincide.
pub fn triple_transitivity(cert: &DimensionCertificate) -> bool {
    cert.dim_t0 == cert.dim_t_tilde
}

/// Dimensions of two commutants, both solved exactly over the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutantReport {
    pub orbital_count: u64,
    /// `dim {A : B_i A = A B_i for all orbital matrices B_i}`.
    pub orbital_commutant_dim: u64,
    /// `dim {A : X(g) A = A X(g) for all g}`, with `X` the conjugation
    /// permutation representation.
    pub action_commutant_dim: u64,
}

/// Dimension of the space of matrices commuting with every matrix in
/// `matrices` (each a list of `(row, col, value)` entries).
pub fn commutant_dimension(side: usize, matrices: &[Vec<(usize, usize, i64)>]) -> u64 {
    let field = Rationals;
    let unknowns = side * side;
    let mut basis = EchelonBasis::new(field, unknowns);
    for m in matrices {
        let mut rows_of: Vec<Vec<(usize, i64)>> = vec![Vec::new(); side];
        let mut cols_of: Vec<Vec<(usize, i64)>> = vec![Vec::new(); side];
        for &(x, z, v) in m {
            rows_of[x].push((z, v));
            cols_of[z].push((x, v));
        }
        for x in 0..side {
            for y in 0..side {
                // (M A - A M)(x, y) = sum_z M(x,z) A(z,y) - A(x,z) M(z,y)
                let mut terms: Vec<(usize, i64)> = Vec::new();
                terms.extend(rows_of[x].iter().map(|&(z, v)| (z * side + y, v)));
                terms.extend(cols_of[y].iter().map(|&(z, v)| (x * side + z, -v)));
                terms.sort_unstable();
                let mut merged: Vec<(u32, _)> = Vec::new();
                for (p, v) in terms {
                    match merged.last_mut() {
                        Some((q, acc)) if *q as usize == p => *acc += v,
                        _ => merged.push((p as u32, v)),
                    }
                }
                let eq: Vec<(u32, _)> =
                    merged.into_iter().filter(|&(_, v)| v != 0).map(|(p, v)| (p, field.from_i64(v))).collect();
                if eq.is_empty() {
                    continue;
                }
                basis.insert_sparse(&SparseVec::from_sorted(eq));
                if basis.rank() == unknowns {
                    return 0;
                }
            }
        }
    }
    (unknowns - basis.rank()) as u64
}

/// Builds the orbital matrices and the conjugation permutation matrices of a
/// small group and solves both commutant systems.
pub fn commutant_oracle(table: &CayleyTable, orbitals: &Orbitals) -> Result<CommutantReport> {
    let side = table.order();
    if side > COMMUTANT_MAX_ORDER {
        return Err(Error::SizeGuard { what: "commutant oracle", order: side, limit: COMMUTANT_MAX_ORDER });
    }
    let orbital_matrices: Vec<Vec<(usize, usize, i64)>> = (0..orbitals.count())
        .map(|i| orbitals.support(i).into_iter().map(|p| (p / side, p % side, 1)).collect())
        .collect();
    // X(g)_{u,v} = 1 iff v = g u g^-1
    let action_matrices: Vec<Vec<(usize, usize, i64)>> =
        (0..side).map(|g| (0..side).map(|u| (u, table.conj(g, u), 1)).collect()).collect();
    Ok(CommutantReport {
        orbital_count: orbitals.count() as u64,
        orbital_commutant_dim: commutant_dimension(side, &orbital_matrices),
        action_commutant_dim: commutant_dimension(side, &action_matrices),
    })
}
