//! The metacyclic groups `D_{n,s} = <a, b | a^n = b^2 = 1, b a b^-1 = a^s>`,
//! generic Cayley tables, and the brute-force conjugation routines that the
//! rest of the crate uses as oracles.
//!
//! Elements of `D_{n,s}` are kept in the normal form `b^eps a^idx`. Their
//! Cayley-table index is `eps * n + idx`, so the identity is index 0 and the
//! rotations `a^i` occupy the first `n` slots.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` for which brute-force conjugation runs by default.
pub const BRUTE_FORCE_MAX_N: u64 = 40;

/// Validated parameters `(n, s)` of `D_{n,s}` together with `tau = gcd(s - 1, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    n: u64,
    s: u64,
    tau: u64,
}

impl GroupParams {
    pub fn new(n: u64, s: u64) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidParams { n, s, reason: reason.to_string() };
        if n < 3 {
            return Err(invalid("n must be at least 3"));
        }
        if s == 0 || s >= n {
            return Err(invalid("s must satisfy 1 <= s < n"));
        }
        if (s * s) % n != 1 {
            return Err(invalid("s^2 is not congruent to 1 mod n"));
        }
        if s % n == 1 {
            return Err(invalid("s is congruent to 1 mod n"));
        }
        let tau = (s - 1).gcd(&n);
        debug_assert_eq!(s.gcd(&n), 1);
        debug_assert_eq!((n - tau) % 2, 0);
        Ok(Self { n, s, tau })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn order(&self) -> usize {
        2 * self.n as usize
    }

    /// Number of two-element classes `{a^m, a^{ms}}`.
    pub fn pair_class_count(&self) -> u64 {
        (self.n - self.tau) / 2
    }

    pub fn class_count(&self) -> u64 {
        2 * self.tau + self.pair_class_count()
    }

    /// `(n^2 + 3 n tau + 4 tau^2) / 2`, the common value of `dim T0`, `dim T`
    /// and the orbital count.
    pub fn formula_dimension(&self) -> u64 {
        let (n, t) = (self.n, self.tau);
        (n * n + 3 * n * t + 4 * t * t) / 2
    }

    /// Every `s` in `[2, n - 1]` with `s^2 = 1 (mod n)`, in ascending order.
    pub fn valid_twists(n: u64) -> Vec<u64> {
        if n < 3 {
            return Vec::new();
        }
        (2..n).filter(|&s| (s * s) % n == 1).collect()
    }

    /// All valid `(n, s)` with `n_min <= n <= n_max`, ordered by `(n, s)`.
    pub fn enumerate(n_min: u64, n_max: u64) -> Vec<GroupParams> {
        (n_min.max(3)..=n_max)
            .flat_map(|n| Self::valid_twists(n).into_iter().map(move |s| (n, s)))
            .map(|(n, s)| GroupParams::new(n, s).expect("enumerated parameters are valid"))
            .collect()
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D_{{{},{}}}", self.n, self.s)
    }
}

pub fn validate_params(n: u64, s: u64) -> Result<GroupParams> {
    GroupParams::new(n, s)
}

/// `b^eps a^idx` with `eps` in `{0, 1}` and `0 <= idx < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub eps: u8,
    pub idx: u64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { eps: 0, idx: 0 };

    pub fn new(eps: u8, idx: u64) -> Self {
        assert!(eps <= 1, "eps must be 0 or 1");
        Self { eps, idx }
    }

    /// `a^i`, reduced mod `n`.
    pub fn rotation(i: u64, n: u64) -> Self {
        Self { eps: 0, idx: i % n }
    }

    /// `b a^i`, reduced mod `n`.
    pub fn reflection(i: u64, n: u64) -> Self {
        Self { eps: 1, idx: i % n }
    }

    /// `(b^e a^i)(b^d a^j) = b^{e xor d} a^{i s^d + j}`.
    pub fn mul(self, other: Self, params: &GroupParams) -> Self {
        let n = params.n;
        let twisted = if other.eps == 1 { mulmod(self.idx, params.s, n) } else { self.idx };
        Self { eps: self.eps ^ other.eps, idx: (twisted + other.idx) % n }
    }

    pub fn inverse(self, params: &GroupParams) -> Self {
        let n = params.n;
        if self.eps == 0 {
            Self { eps: 0, idx: (n - self.idx) % n }
        } else {
            // (b a^i)^-1 = a^-i b = b a^{-i s}
            Self { eps: 1, idx: (n - mulmod(self.idx, params.s, n)) % n }
        }
    }

    pub fn index(self, n: u64) -> usize {
        (self.eps as u64 * n + self.idx) as usize
    }

    pub fn from_index(index: usize, n: u64) -> Self {
        let index = index as u64;
        Self { eps: (index / n) as u8, idx: index % n }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.eps, self.idx) {
            (0, 0) => write!(f, "e"),
            (0, i) => write!(f, "a^{i}"),
            (_, 0) => write!(f, "b"),
            (_, i) => write!(f, "b a^{i}"),
        }
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: usize,
}

impl CayleyTable {
    /// Builds the table from a product function and checks that every row and
    /// column is a permutation and that a two-sided identity exists.
    /// Associativity is not checked here; see [`CayleyTable::check_associativity`].
    pub fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidTable("empty group".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let z = mul(x, y);
                if z >= order {
                    return Err(Error::InvalidTable(format!("product {x}*{y} = {z} out of range")));
                }
                table.push(z as u32);
            }
        }
        let mut seen = vec![false; order];
        for x in 0..order {
            seen.iter_mut().for_each(|b| *b = false);
            for y in 0..order {
                let z = table[x * order + y] as usize;
                if std::mem::replace(&mut seen[z], true) {
                    return Err(Error::InvalidTable(format!("row {x} repeats element {z}")));
                }
            }
            seen.iter_mut().for_each(|b| *b = false);
            for y in 0..order {
                let z = table[y * order + x] as usize;
                if std::mem::replace(&mut seen[z], true) {
                    return Err(Error::InvalidTable(format!("column {x} repeats element {z}")));
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x && table[x * order + e] as usize == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        let mut inverse = vec![0u32; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| table[x * order + y] as usize == identity)
                .expect("latin square rows contain the identity");
            if table[y * order + x] as usize != identity {
                return Err(Error::InvalidTable(format!("element {x} has no two-sided inverse")));
            }
            inverse[x] = y as u32;
        }
        Ok(Self { order, table, inverse, identity })
    }

    /// Builds a table from explicit rows and verifies all group axioms,
    /// associativity included.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::InvalidTable("table is not square".into()));
        }
        let table = Self::from_fn(order, |x, y| rows[x][y])?;
        if !table.check_associativity(None) {
            return Err(Error::InvalidTable("multiplication is not associative".into()));
        }
        Ok(table)
    }

    /// The symmetric group on `k` points, elements in lexicographic order of
    /// their one-line notation, composition `(p q)(i) = p(q(i))`.
    pub fn symmetric_group(k: usize) -> Self {
        let perms = permutations(k);
        let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).expect("closed under composition");
        Self::from_fn(perms.len(), |x, y| {
            let composed: Vec<usize> = perms[y].iter().map(|&i| perms[x][i]).collect();
            index_of(&composed)
        })
        .expect("symmetric group table is valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn is_latin_square(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            (0..n).all(|y| {
                !std::mem::replace(&mut row[self.mul(x, y)], true) && !std::mem::replace(&mut col[self.mul(y, x)], true)
            })
        })
    }

    /// Checks `(xy)z = x(yz)` on every triple, or on every `stride`-th first
    /// factor when a stride is given.
    pub fn check_associativity(&self, stride: Option<usize>) -> bool {
        let n = self.order;
        let step = stride.unwrap_or(1).max(1);
        (0..n).step_by(step).all(|x| {
            (0..n).all(|y| {
                let xy = self.mul(x, y);
                (0..n).all(|z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// `D_{n,s}` with its Cayley table in the `eps * n + idx` indexing.
#[derive(Debug, Clone)]
pub struct DnsGroup {
    params: GroupParams,
    table: CayleyTable,
}

impl DnsGroup {
    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement::from_index(index, self.params.n)
    }

    pub fn index_of(&self, g: GroupElement) -> usize {
        g.index(self.params.n)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }
}

pub fn build_group(params: GroupParams) -> DnsGroup {
    let n = params.n;
    let table = CayleyTable::from_fn(params.order(), |x, y| {
        GroupElement::from_index(x, n).mul(GroupElement::from_index(y, n), &params).index(n)
    })
    .expect("normal-form multiplication yields a group table");
    debug_assert_eq!(table.identity(), 0);
    DnsGroup { params, table }
}

/// Conjugacy classes as sorted element-index lists, plus the inverse map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ClassPartition {
    /// Builds a partition from classes in the given order. Every class is
    /// sorted; the classes must cover `0..order` exactly once.
    pub fn from_classes(order: usize, mut classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut class_of = vec![usize::MAX; order];
        for (c, class) in classes.iter_mut().enumerate() {
            class.sort_unstable();
            for &x in class.iter() {
                if x >= order || class_of[x] != usize::MAX {
                    return Err(Error::InvalidTable(format!("element {x} is missing or repeated in class list")));
                }
                class_of[x] = c;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(Error::InvalidTable("classes do not cover the group".into()));
        }
        Ok(Self { classes, class_of })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn order(&self) -> usize {
        self.class_of.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Classes as a canonical set: sorted list of sorted classes.
    pub fn canonical(&self) -> Vec<Vec<usize>> {
        let mut v = self.classes.clone();
        v.sort();
        v
    }

    /// Index of the class `Cl_i^-1`.
    pub fn inverse_class(&self, table: &CayleyTable, i: usize) -> usize {
        self.class_of(table.inv(self.classes[i][0]))
    }

    /// Applies a permutation of class ids: class `i` of the result is class
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let classes: Vec<Vec<usize>> = perm.iter().map(|&p| self.classes[p].clone()).collect();
        Self::from_classes(self.order(), classes).expect("permutation of a partition is a partition")
    }
}

/// Conjugacy classes by brute force, ordered by their smallest element.
pub fn brute_force_classes(table: &CayleyTable) -> ClassPartition {
    let n = table.order();
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let mut class: Vec<usize> = (0..n).map(|g| table.conj(g, x)).collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            assigned[y] = true;
        }
        classes.push(class);
    }
    ClassPartition::from_classes(n, classes).expect("conjugation orbits partition the group")
}

/// `|{h : hg = gh}|` by brute force.
pub fn centralizer_order(table: &CayleyTable, g: usize) -> usize {
    (0..table.order()).filter(|&h| table.mul(h, g) == table.mul(g, h)).count()
}

/// `X_i` (central rotations), `Y_i` (pairs `{a^m, a^{ms}}`), `Z_i` (reflection cosets).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    X,
    Y,
    Z,
}

/// A class label such as `Y3`; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassLabel {
    pub kind: ClassKind,
    pub index: u64,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.index)
    }
}

/// Labeled conjugacy classes of `D_{n,s}`.
///
/// Classes are ordered `X_1..X_tau, Y_1..Y_{(n-tau)/2}, Z_1..Z_tau` with
/// representatives `u_i = a^{n i / tau}`, `v_i = a^{m_i}` (`m_i` the smallest
/// exponent in the class, ascending) and `b w_i` with `w_i = a^i`. The
/// identity therefore sits in `X_tau`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyData {
    pub params: GroupParams,
    pub partition: ClassPartition,
    pub labels: Vec<ClassLabel>,
    pub reps: Vec<GroupElement>,
    pub centralizer_orders: Vec<u64>,
    /// Whether the brute-force orbit route was run and agreed.
    pub brute_force_checked: bool,
}

impl ConjugacyData {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn identity_class(&self) -> usize {
        self.partition.class_of(0)
    }

    pub fn class_size(&self, i: usize) -> usize {
        self.partition.class(i).len()
    }

    pub fn kinds(&self) -> Vec<ClassKind> {
        self.labels.iter().map(|l| l.kind).collect()
    }
}

/// Closed-form centralizer order: `2n` on `C_n[tau]`, `n` on the rest of
/// `C_n`, `2 tau` on reflections.
pub fn closed_form_centralizer(params: &GroupParams, g: GroupElement) -> u64 {
    let (n, tau) = (params.n, params.tau);
    match g.eps {
        0 if g.idx % (n / tau) == 0 => 2 * n,
        0 => n,
        _ => 2 * tau,
    }
}

/// The labeled classes from the closed form: `Cl(u) = {u}` on `C_n[tau]`,
/// `{u, u^s}` elsewhere in `C_n`, and `Cl(b u) = b u C_n^tau`.
pub fn closed_form_classes(params: &GroupParams) -> ConjugacyData {
    let (n, s, tau) = (params.n, params.s, params.tau);
    let step = n / tau;
    let mut labels = Vec::new();
    let mut classes = Vec::new();
    let mut reps = Vec::new();

    for i in 1..=tau {
        let u = GroupElement::rotation(step * i, n);
        labels.push(ClassLabel { kind: ClassKind::X, index: i });
        classes.push(vec![u.index(n)]);
        reps.push(u);
    }
    let mut y = 0;
    for m in 1..n {
        let ms = mulmod(m, s, n);
        if m % step == 0 || ms < m {
            continue;
        }
        y += 1;
        labels.push(ClassLabel { kind: ClassKind::Y, index: y });
        classes.push(vec![m as usize, ms as usize]);
        reps.push(GroupElement::rotation(m, n));
    }
    debug_assert_eq!(y, params.pair_class_count());
    for i in 1..=tau {
        let w = GroupElement::reflection(i, n);
        labels.push(ClassLabel { kind: ClassKind::Z, index: i });
        classes.push((0..step).map(|j| GroupElement::reflection(i + tau * j, n).index(n)).collect());
        reps.push(w);
    }
    let centralizer_orders = reps.iter().map(|&g| closed_form_centralizer(params, g)).collect();
    let partition =
        ClassPartition::from_classes(params.order(), classes).expect("closed-form classes partition D_{n,s}");
    ConjugacyData { params: *params, partition, labels, reps, centralizer_orders, brute_force_checked: false }
}

/// Labeled classes of `D_{n,s}`. With `brute_force` set, conjugation orbits
/// and brute-force centralizer orders are computed as well and must agree
/// with the closed form element for element.
pub fn conjugacy_classes(group: &DnsGroup, brute_force: bool) -> Result<ConjugacyData> {
    let mut data = closed_form_classes(&group.params);
    if !brute_force {
        return Ok(data);
    }
    let table = &group.table;
    let orbits = brute_force_classes(table);
    if orbits.canonical() != data.partition.canonical() {
        return Err(Error::RouteDisagreement {
            what: "conjugacy classes",
            detail: format!("{} orbits vs {} closed-form classes for {}", orbits.len(), data.len(), group.params),
        });
    }
    for (i, &rep) in data.reps.iter().enumerate() {
        let brute = centralizer_order(table, group.index_of(rep)) as u64;
        if brute != data.centralizer_orders[i] {
            return Err(Error::RouteDisagreement {
                what: "centralizer order",
                detail: format!(
                    "{} at {}: brute force {brute}, closed form {}",
                    group.params, rep, data.centralizer_orders[i]
                ),
            });
        }
    }
    data.brute_force_checked = true;
    Ok(data)
}

/// Orbits of `G` acting on `G x G` by simultaneous conjugation.
#[derive(Debug, Clone)]
pub struct Orbitals {
    order: usize,
    orbit_of: Vec<u32>,
    count: usize,
}

impl Orbitals {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn orbit_of(&self, x: usize, y: usize) -> usize {
        self.orbit_of[x * self.order + y] as usize
    }

    /// The 0/1 matrix of orbital `i`, as row-major positions `x * |G| + y`.
    pub fn support(&self, i: usize) -> Vec<usize> {
        (0..self.orbit_of.len()).filter(|&p| self.orbit_of[p] as usize == i).collect()
    }
}

/// Enumerates orbitals explicitly; orbitals are numbered in row-major order of
/// their first pair.
pub fn enumerate_orbitals(table: &CayleyTable) -> Orbitals {
    let n = table.order();
    let mut orbit_of = vec![u32::MAX; n * n];
    let mut count = 0u32;
    for x in 0..n {
        for y in 0..n {
            if orbit_of[x * n + y] != u32::MAX {
                continue;
            }
            for g in 0..n {
                orbit_of[table.conj(g, x) * n + table.conj(g, y)] = count;
            }
            count += 1;
        }
    }
    Orbitals { order: n, orbit_of, count: count as usize }
}

/// `(1/|G|) sum_g |C_G(g)|^2` with brute-force centralizers.
pub fn burnside_orbital_count(table: &CayleyTable) -> u64 {
    let n = table.order();
    let total: u64 = (0..n).into_par_iter().map(|g| (centralizer_order(table, g) as u64).pow(2)).sum();
    debug_assert_eq!(total % n as u64, 0);
    total / n as u64
}

/// Number of orbitals, by the Burnside sum and by explicit enumeration; the
/// two must agree.
pub fn orbital_count(table: &CayleyTable) -> Result<u64> {
    let burnside = burnside_orbital_count(table);
    let explicit = enumerate_orbitals(table).count() as u64;
    if burnside != explicit {
        return Err(Error::RouteDisagreement {
            what: "orbital count",
            detail: format!("Burnside {burnside}, enumeration {explicit}"),
        });
    }
    Ok(burnside)
}

/// `sum_i |C_G(x_i)|` over class representatives, using closed-form
/// centralizer orders.
pub fn closed_form_orbital_count(classes: &ConjugacyData) -> u64 {
    classes.centralizer_orders.iter().sum()
}
