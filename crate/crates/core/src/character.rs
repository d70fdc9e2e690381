//! Character table of `D_{n,s}` and the multiplicities of its irreducible
//! characters in the conjugation character `pi(g) = |C_G(g)|`.
//!
//! Values are sums of signed powers of `w = exp(2 pi i / n)`. They are kept in
//! that symbolic form and evaluated in double precision when needed.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ClassLabel, ConjugacyData, GroupElement, GroupParams};

pub const ORTHOGONALITY_TOL: f64 = 1e-9;
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// `psi_{k,1}`, `psi_{k,2}` (`0 <= k < tau`) and `phi_k` (canonical `k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CharLabel {
    Psi1(u64),
    Psi2(u64),
    Phi(u64),
}

impl CharLabel {
    pub fn degree(&self) -> u64 {
        match self {
            CharLabel::Phi(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharLabel::Psi1(k) => write!(f, "psi_{{{k},1}}"),
            CharLabel::Psi2(k) => write!(f, "psi_{{{k},2}}"),
            CharLabel::Phi(k) => write!(f, "phi_{k}"),
        }
    }
}

/// A sum of terms `sign * w^exponent`, exponents reduced mod `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharValue {
    pub terms: Vec<(i8, u64)>,
}

impl CharValue {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn numeric(&self, n: u64) -> Complex64 {
        self.terms.iter().map(|&(sign, e)| Complex64::from_polar(sign as f64, TAU * e as f64 / n as f64)).sum()
    }

    /// Text such as `w^3 + w^5`, `-w^0`, or `0`.
    pub fn symbolic(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, &(sign, e)) in self.terms.iter().enumerate() {
            match (i, sign < 0) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&format!("w^{e}"));
        }
        out
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Canonical representatives `min(k, ks mod n)` of the two-dimensional
/// characters, `1 <= k <= n - 1` with `k != 0 (mod n / tau)`, ascending.
pub fn two_dim_reps(params: &GroupParams) -> Vec<u64> {
    let (n, s, tau) = (params.n(), params.s(), params.tau());
    let step = n / tau;
    assert!(step >= 2, "tau < n for every valid twist");
    (1..n)
        .filter(|&k| k % step != 0)
        .filter(|&k| {
            let ks = mulmod(k, s, n);
            debug_assert_ne!(ks, k);
            k < ks
        })
        .collect()
}

/// Value of the character `label` at an arbitrary element.
pub fn character_value(params: &GroupParams, label: CharLabel, g: GroupElement) -> CharValue {
    let (n, s, tau) = (params.n(), params.s(), params.tau());
    match label {
        CharLabel::Psi1(k) | CharLabel::Psi2(k) => {
            // Psi(a) = w^{nk/tau}, Psi(b) = +1 or -1
            let e = mulmod((n / tau) * k % n, g.idx, n);
            let sign = if g.eps == 1 && matches!(label, CharLabel::Psi2(_)) { -1 } else { 1 };
            CharValue { terms: vec![(sign, e)] }
        }
        CharLabel::Phi(k) => {
            if g.eps == 1 {
                return CharValue::zero();
            }
            let e = mulmod(k, g.idx, n);
            CharValue { terms: vec![(1, e), (1, mulmod(e, s, n))] }
        }
    }
}

/// All irreducible labels in table order: `psi_{k,1}`, then `psi_{k,2}`, then `phi_k`.
pub fn character_labels(params: &GroupParams) -> Vec<CharLabel> {
    let tau = params.tau();
    (0..tau)
        .map(CharLabel::Psi1)
        .chain((0..tau).map(CharLabel::Psi2))
        .chain(two_dim_reps(params).into_iter().map(CharLabel::Phi))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableColumn {
    pub label: ClassLabel,
    pub rep: GroupElement,
    pub size: u64,
    pub centralizer: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: CharLabel,
    pub degree: u64,
    pub values: Vec<CharValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharTable {
    pub params: GroupParams,
    pub columns: Vec<TableColumn>,
    pub rows: Vec<TableRow>,
}

impl CharTable {
    pub fn numeric(&self, row: usize, col: usize) -> Complex64 {
        self.rows[row].values[col].numeric(self.params.n())
    }

    pub fn order(&self) -> u64 {
        2 * self.params.n()
    }

    pub fn degree_square_sum(&self) -> u64 {
        self.rows.iter().map(|r| r.degree * r.degree).sum()
    }
}

/// Evaluates every irreducible character at the labeled class representatives.
pub fn char_table(params: &GroupParams, classes: &ConjugacyData) -> CharTable {
    let columns: Vec<TableColumn> = (0..classes.len())
        .map(|i| TableColumn {
            label: classes.labels[i],
            rep: classes.reps[i],
            size: classes.class_size(i) as u64,
            centralizer: classes.centralizer_orders[i],
        })
        .collect();
    let rows = character_labels(params)
        .into_iter()
        .map(|label| TableRow {
            label,
            degree: label.degree(),
            values: columns.iter().map(|c| character_value(params, label, c.rep)).collect(),
        })
        .collect();
    CharTable { params: *params, columns, rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub max_deviation: f64,
    pub pairs_checked: usize,
}

/// First orthogonality relation: `<chi_i, chi_j> = delta_ij` within `1e-9`.
pub fn orthogonality_check(table: &CharTable) -> Result<OrthogonalityReport> {
    let order = table.order() as f64;
    let rows = table.rows.len();
    if rows != table.columns.len() {
        return Err(Error::CharacterCheck(format!("{rows} characters but {} classes", table.columns.len())));
    }
    let values: Vec<Vec<Complex64>> =
        (0..rows).map(|i| (0..table.columns.len()).map(|c| table.numeric(i, c)).collect()).collect();
    let mut max_deviation: f64 = 0.0;
    for i in 0..rows {
        for j in 0..rows {
            let inner: Complex64 = table
                .columns
                .iter()
                .enumerate()
                .map(|(c, col)| values[i][c] * values[j][c].conj() * col.size as f64)
                .sum::<Complex64>()
                / order;
            let expected = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((inner - expected).norm());
        }
    }
    if max_deviation > ORTHOGONALITY_TOL {
        return Err(Error::CharacterCheck(format!("orthogonality deviation {max_deviation:e}")));
    }
    Ok(OrthogonalityReport { max_deviation, pairs_checked: rows * rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    RowSum,
    ClosedForm,
}

/// Multiplicities of the irreducible characters in the conjugation character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicities {
    /// Coefficient of `psi_{k,1}`, `k = 0..tau`.
    pub d1: Vec<u64>,
    /// Coefficient of `psi_{k,2}`, `k = 0..tau`.
    pub d2: Vec<u64>,
    /// `(k, d_k)` for each canonical two-dimensional `k`, ascending.
    pub d2dim: Vec<(u64, u64)>,
    pub route: Route,
}

impl Multiplicities {
    /// `(label, d)` in character-table order.
    pub fn by_label(&self) -> Vec<(CharLabel, u64)> {
        let tau = self.d1.len() as u64;
        (0..tau)
            .map(|k| (CharLabel::Psi1(k), self.d1[k as usize]))
            .chain((0..tau).map(|k| (CharLabel::Psi2(k), self.d2[k as usize])))
            .chain(self.d2dim.iter().map(|&(k, d)| (CharLabel::Phi(k), d)))
            .collect()
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.by_label().iter().map(|(_, d)| d * d).sum()
    }

    /// Same values regardless of route.
    pub fn same_values(&self, other: &Multiplicities) -> bool {
        self.d1 == other.d1 && self.d2 == other.d2 && self.d2dim == other.d2dim
    }
}

/// `d_i = sum_j conj(chi_i(x_j))` over the class representatives, rounded to
/// integers within `1e-6`.
pub fn multiplicities_rowsum(table: &CharTable) -> Result<Multiplicities> {
    let tau = table.params.tau();
    let mut mult = Multiplicities { d1: Vec::new(), d2: Vec::new(), d2dim: Vec::new(), route: Route::RowSum };
    for (i, row) in table.rows.iter().enumerate() {
        let sum: Complex64 = (0..table.columns.len()).map(|c| table.numeric(i, c).conj()).sum();
        let rounded = sum.re.round();
        if sum.im.abs() > INTEGRALITY_TOL || (sum.re - rounded).abs() > INTEGRALITY_TOL || rounded < 0.0 {
            return Err(Error::NonIntegral { label: row.label.to_string(), value: format!("{sum}") });
        }
        let d = rounded as u64;
        match row.label {
            CharLabel::Psi1(_) => mult.d1.push(d),
            CharLabel::Psi2(_) => mult.d2.push(d),
            CharLabel::Phi(k) => mult.d2dim.push((k, d)),
        }
    }
    debug_assert_eq!(mult.d1.len() as u64, tau);
    Ok(mult)
}

/// Which branch of the closed form produced a one-dimensional multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearCase {
    /// `k = 0 (mod tau)`.
    Divisible,
    /// `k != 0 (mod tau)` and `nk = 0 (mod tau^2)`: the value is `tau / 2`.
    Half,
    Zero,
}

pub fn linear_case(params: &GroupParams, k: u64) -> LinearCase {
    let (n, tau) = (params.n(), params.tau());
    if k % tau == 0 {
        LinearCase::Divisible
    } else if (n as u128 * k as u128) % (tau as u128 * tau as u128) == 0 {
        LinearCase::Half
    } else {
        LinearCase::Zero
    }
}

/// Closed-form multiplicities: `(n + 3 tau)/2, tau/2, 0` for `psi_{k,1}`,
/// `(n - tau)/2, tau/2, 0` for `psi_{k,2}`, and `tau` or `0` for `phi_k`
/// according to `k = 0 (mod tau)`.
///
/// A `tau / 2` branch with odd `tau` is reported as [`Error::NonIntegral`].
pub fn multiplicities_closedform(params: &GroupParams) -> Result<Multiplicities> {
    let (n, tau) = (params.n(), params.tau());
    let half = |label: CharLabel| {
        if tau % 2 == 1 {
            Err(Error::NonIntegral {
                label: label.to_string(),
                value: format!("{tau}/2 at (n, s) = ({n}, {})", params.s()),
            })
        } else {
            Ok(tau / 2)
        }
    };
    let mut d1 = Vec::with_capacity(tau as usize);
    let mut d2 = Vec::with_capacity(tau as usize);
    for k in 0..tau {
        let (a, b) = match linear_case(params, k) {
            LinearCase::Divisible => ((n + 3 * tau) / 2, (n - tau) / 2),
            LinearCase::Half => (half(CharLabel::Psi1(k))?, half(CharLabel::Psi2(k))?),
            LinearCase::Zero => (0, 0),
        };
        d1.push(a);
        d2.push(b);
    }
    let d2dim = two_dim_reps(params).into_iter().map(|k| (k, if k % tau == 0 { tau } else { 0 })).collect();
    Ok(Multiplicities { d1, d2, d2dim, route: Route::ClosedForm })
}

/// How often the `tau / 2` branch fires for one group, split by parity of `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HalfCaseCensus {
    pub groups: u64,
    pub groups_with_half_case: u64,
    pub half_case_firings: u64,
    pub odd_tau_firings: u64,
}

impl HalfCaseCensus {
    pub fn of(params: &GroupParams) -> Self {
        let firings = (0..params.tau()).filter(|&k| linear_case(params, k) == LinearCase::Half).count() as u64;
        Self {
            groups: 1,
            groups_with_half_case: (firings > 0) as u64,
            half_case_firings: firings,
            odd_tau_firings: if params.tau() % 2 == 1 { firings } else { 0 },
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.groups += other.groups;
        self.groups_with_half_case += other.groups_with_half_case;
        self.half_case_firings += other.half_case_firings;
        self.odd_tau_firings += other.odd_tau_firings;
        self
    }
}

/// Largest residual of `sum_i d_i chi_i(g) - |C_G(g)|` over the given
/// `(element, centralizer order)` pairs.
pub fn permutation_character_residual(
    params: &GroupParams,
    mult: &Multiplicities,
    points: impl IntoIterator<Item = (GroupElement, u64)>,
) -> f64 {
    let terms = mult.by_label();
    points
        .into_iter()
        .map(|(g, centralizer)| {
            let pi: Complex64 =
                terms.iter().map(|&(label, d)| character_value(params, label, g).numeric(params.n()) * d as f64).sum();
            (pi - centralizer as f64).norm()
        })
        .fold(0.0, f64::max)
}
