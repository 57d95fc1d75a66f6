//! Codes up to monomial equivalence over GF(2) and GF(3).
//!
//! The group acting on GF(q)^n is S_n for q = 2 and {±1}^n ⋊ S_n for q = 3.
//! A group element is a pair (signs, perm) applied as "signs then
//! permutation": column j is first multiplied by its sign, then moved to
//! position perm[j].
//!
//! The canonical form of a code is the smallest RREF generator matrix in its
//! orbit, comparing entries in row-major order.
//!
//! Classification sweeps orbits rather than canonicalizing each code: every
//! enumerated code not yet seen starts a new class, and its whole orbit is
//! generated and marked. The orbit gives the canonical form as its minimum
//! and the automorphism group order as |G| / |orbit|, which is checked
//! against a direct stabilizer count.

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brute::{enumerate_rref, Filters};
use crate::census::sendrier_count;
use crate::error::{Error, Result};
use crate::gf::{bits, rref_in_place, Code, Field, Matrix};
use crate::qcomb::{gaussian_binomial, Count};

/// Largest length the orbit search accepts.
pub const MAX_ORBIT_LENGTH: u32 = 10;
/// Upper limit on codes held in the seen set during one classification.
pub const MAX_STORED_FORMS: u64 = 10_000_000;

/// Default length limits for a full classification.
pub fn default_max_length(q: u32) -> u32 {
    if q == 2 {
        8
    } else {
        6
    }
}

fn check_field(q: u32) -> Result<&'static Field> {
    if q != 2 && q != 3 {
        return Err(Error::Unsupported(format!(
            "classification supports q = 2 and q = 3 only, got q = {q}"
        )));
    }
    Field::of_order(q)
}

fn check_length(n: usize) -> Result<()> {
    if n as u32 > MAX_ORBIT_LENGTH {
        return Err(Error::GuardExceeded {
            needed: Count::from(n as u64),
            limit: Count::from(MAX_ORBIT_LENGTH as u64),
            unit: "coordinates (orbit search length)",
        });
    }
    Ok(())
}

/// Order of the monomial group: n! for q = 2, 2^n n! for q = 3.
pub fn group_order(n: u32, q: u32) -> Count {
    let fact: Count = (1..=n as u64).fold(Count::one(), |acc, i| acc * Count::from(i));
    if q == 3 {
        fact * crate::qcomb::q_power(2, n as u64)
    } else {
        fact
    }
}

type Perms = Arc<Vec<Vec<u8>>>;

/// All permutations of 0..n in lexicographic order, cached per n.
fn permutations(n: usize) -> Perms {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Perms>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("permutation cache").get(&n) {
        return p.clone();
    }
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(cur.clone());
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    let out = Arc::new(out);
    cache
        .lock()
        .expect("permutation cache")
        .insert(n, out.clone());
    out
}

/// Row-major RREF of the column-permuted matrix, rank rows only.
fn permuted_rref(f: &Field, data: &[u8], k: usize, n: usize, perm: &[u8]) -> (Vec<u8>, Vec<usize>) {
    let mut out = vec![0u8; k * n];
    for r in 0..k {
        for j in 0..n {
            out[r * n + perm[j] as usize] = data[r * n + j];
        }
    }
    let pivots = rref_in_place(f, &mut out, k, n);
    out.truncate(pivots.len() * n);
    (out, pivots)
}

/// Row-major entries of binary RREF rows, column 0 first.
fn binary_key(rows: &[u64], n: usize) -> u128 {
    rows.iter().fold(0u128, |acc, &r| {
        let rev = (r.reverse_bits() >> (64 - n)) as u128;
        (acc << n) | rev
    })
}

fn unpack_key(key: u128, k: usize, n: usize) -> Vec<u8> {
    let total = k * n;
    (0..total)
        .map(|i| ((key >> (total - 1 - i)) & 1) as u8)
        .collect()
}

/// For a ternary RREF, picks column signs making the matrix row-major
/// smallest. Entry (i, c) becomes R[i][c] * s[p_i] * s[c]; walking nonzero
/// entries in order, each still-free relation between s[p_i] and s[c] is
/// fixed so the entry becomes 1.
fn ternary_sign_canonical(f: &Field, r: &[u8], pivots: &[usize], n: usize) -> Vec<u8> {
    // union-find with parity: sign(x) = sign(root) * (-1)^parity(x)
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity = vec![0u8; n];
    fn find(parent: &mut [usize], parity: &mut [u8], x: usize) -> (usize, u8) {
        if parent[x] == x {
            return (x, 0);
        }
        let (root, p) = find(parent, parity, parent[x]);
        parity[x] ^= p;
        parent[x] = root;
        (root, parity[x])
    }
    for (i, &p) in pivots.iter().enumerate() {
        for c in 0..n {
            let v = r[i * n + c];
            if v == 0 || c == p {
                continue;
            }
            let (ra, pa) = find(&mut parent, &mut parity, p);
            let (rb, pb) = find(&mut parent, &mut parity, c);
            if ra != rb {
                // want s[p] * s[c] = v as a sign, i.e. parity(p) ^ parity(c) = [v == 2]
                let want = u8::from(v == 2);
                parent[rb] = ra;
                parity[rb] = pa ^ pb ^ want;
            }
        }
    }
    let sign: Vec<u8> = (0..n)
        .map(|x| find(&mut parent, &mut parity, x).1)
        .collect();
    let mut out = r.to_vec();
    for (i, &p) in pivots.iter().enumerate() {
        for c in 0..n {
            if sign[p] ^ sign[c] == 1 {
                out[i * n + c] = f.neg(out[i * n + c]);
            }
        }
    }
    out
}

/// The orbit-minimal RREF generator matrix of the code.
pub fn canonical_form(c: &Code) -> Result<Matrix> {
    let f = check_field(c.field().order())?;
    let (k, n) = (c.dimension(), c.length());
    check_length(n)?;
    let data = c.generator().data();
    let perms = permutations(n);
    let best = if f.order() == 2 {
        let rows = bits::pack(c.generator())?;
        let key = perms
            .par_iter()
            .map(|perm| binary_key(&permute_bits(&rows, perm), n))
            .min()
            .unwrap_or(0);
        unpack_key(key, k, n)
    } else {
        perms
            .par_iter()
            .map(|perm| {
                let (r, pivots) = permuted_rref(f, data, k, n, perm);
                ternary_sign_canonical(f, &r, &pivots, n)
            })
            .min()
            .unwrap_or_default()
    };
    Matrix::new(f, k, n, best)
}

fn permute_bits(rows: &[u64], perm: &[u8]) -> Vec<u64> {
    let mut out: Vec<u64> = rows
        .iter()
        .map(|&r| {
            let mut v = 0u64;
            let mut x = r;
            while x != 0 {
                let j = x.trailing_zeros() as usize;
                x &= x - 1;
                v |= 1 << perm[j];
            }
            v
        })
        .collect();
    let rank = bits::rref(&mut out);
    out.truncate(rank);
    out
}

/// The distinct RREFs in a code's orbit, and how many group elements fix it.
struct Orbit {
    members: Vec<Vec<u8>>,
    stabilizer: u64,
}

fn orbit(f: &Field, k: usize, n: usize, data: &[u8]) -> Result<Orbit> {
    let perms = permutations(n);
    if f.order() == 2 {
        let m = Matrix::new(Field::of_order(2)?, k, n, data.to_vec())?;
        let rows = bits::pack(&m)?;
        let start = binary_key(&rows, n);
        let (set, stab) = perms
            .par_chunks(512)
            .map(|chunk| {
                let mut set = HashSet::new();
                let mut stab = 0u64;
                for perm in chunk {
                    let key = binary_key(&permute_bits(&rows, perm), n);
                    stab += u64::from(key == start);
                    set.insert(key);
                }
                (set, stab)
            })
            .reduce(
                || (HashSet::new(), 0),
                |(mut a, sa), (b, sb)| {
                    a.extend(b);
                    (a, sa + sb)
                },
            );
        return Ok(Orbit {
            members: set.into_iter().map(|key| unpack_key(key, k, n)).collect(),
            stabilizer: stab,
        });
    }
    let start = data.to_vec();
    let (set, stab) = perms
        .par_chunks(64)
        .map(|chunk| {
            let mut set: HashSet<Vec<u8>> = HashSet::new();
            let mut stab = 0u64;
            let mut buf = vec![0u8; k * n];
            for perm in chunk {
                let (r, pivots) = permuted_rref(f, data, k, n, perm);
                for mask in 0u32..(1 << n) {
                    let s = |c: usize| (mask >> c) & 1;
                    for (i, &p) in pivots.iter().enumerate() {
                        for c in 0..n {
                            let v = r[i * n + c];
                            buf[i * n + c] = if s(p) ^ s(c) == 1 { f.neg(v) } else { v };
                        }
                    }
                    if buf == start {
                        stab += 1;
                    }
                    if !set.contains(&buf) {
                        set.insert(buf.clone());
                    }
                }
            }
            (set, stab)
        })
        .reduce(
            || (HashSet::new(), 0),
            |(mut a, sa), (b, sb)| {
                a.extend(b);
                (a, sa + sb)
            },
        );
    Ok(Orbit {
        members: set.into_iter().collect(),
        stabilizer: stab,
    })
}

/// Order of the code's automorphism group inside the monomial group.
pub fn aut_order(c: &Code) -> Result<Count> {
    let f = check_field(c.field().order())?;
    check_length(c.length())?;
    let o = orbit(f, c.dimension(), c.length(), c.generator().data())?;
    Ok(Count::from(o.stabilizer))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeType {
    Linear,
    Even,
    SelfOrthogonal,
    Lcd,
}

impl CodeType {
    pub const ALL: [CodeType; 4] = [
        CodeType::Linear,
        CodeType::Even,
        CodeType::SelfOrthogonal,
        CodeType::Lcd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CodeType::Linear => "linear",
            CodeType::Even => "even",
            CodeType::SelfOrthogonal => "SO",
            CodeType::Lcd => "LCD",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeFlags {
    /// Binary codes only.
    pub even: Option<bool>,
    pub self_orthogonal: bool,
    pub lcd: bool,
}

/// One equivalence class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeClassRecord {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    #[serde(serialize_with = "ser_matrix", deserialize_with = "de_matrix")]
    pub canonical_generator: Matrix,
    pub hull_dim: u32,
    /// Absent for the zero code.
    pub min_d: Option<u32>,
    /// Absent when the dual is the zero code.
    pub dual_d: Option<u32>,
    pub aut_order: Count,
    pub orbit_size: Count,
    pub flags: TypeFlags,
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<String> = m.to_string().lines().map(str::to_string).collect();
    (m.field().order(), m.cols(), rows).serialize(s)
}

fn de_matrix<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Matrix, D::Error> {
    let (q, cols, rows): (u32, usize, Vec<String>) = Deserialize::deserialize(d)?;
    let f = Field::of_order(q).map_err(serde::de::Error::custom)?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(f, 0, cols));
    }
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    Matrix::parse(f, &refs).map_err(serde::de::Error::custom)
}

impl CodeClassRecord {
    pub fn code(&self) -> Code {
        Code::from_generator(&self.canonical_generator)
    }

    pub fn passes(&self, min_d: u32, min_dual_d: u32) -> bool {
        let ok = |d: Option<u32>, bound: u32| bound <= 1 || d.is_some_and(|d| d >= bound);
        ok(self.min_d, min_d) && ok(self.dual_d, min_dual_d)
    }

    pub fn is_type(&self, t: CodeType) -> bool {
        match t {
            CodeType::Linear => true,
            CodeType::Even => self.flags.even == Some(true),
            CodeType::SelfOrthogonal => self.flags.self_orthogonal,
            CodeType::Lcd => self.flags.lcd,
        }
    }
}

/// Class counts by code type and hull dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusTable {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub min_distance: u32,
    pub min_dual_distance: u32,
    pub cells: BTreeMap<CodeType, BTreeMap<u32, u64>>,
}

impl CensusTable {
    pub fn from_records(
        q: u32,
        n: u32,
        k: u32,
        min_d: u32,
        min_dd: u32,
        records: &[CodeClassRecord],
    ) -> Self {
        let mut cells: BTreeMap<CodeType, BTreeMap<u32, u64>> = BTreeMap::new();
        for t in CodeType::ALL {
            if t == CodeType::Even && q != 2 {
                continue;
            }
            let row = cells.entry(t).or_default();
            for h in 0..=k {
                row.insert(h, 0);
            }
        }
        for r in records.iter().filter(|r| r.passes(min_d, min_dd)) {
            for (t, row) in cells.iter_mut() {
                if r.is_type(*t) {
                    *row.entry(r.hull_dim).or_default() += 1;
                }
            }
        }
        CensusTable {
            q,
            n,
            k,
            min_distance: min_d,
            min_dual_distance: min_dd,
            cells,
        }
    }

    pub fn get(&self, t: CodeType, hull_dim: u32) -> u64 {
        self.cells
            .get(&t)
            .and_then(|r| r.get(&hull_dim))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, t: CodeType) -> u64 {
        self.cells.get(&t).map_or(0, |r| r.values().sum())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClassifyOptions {
    /// Raise the default length limit, up to the orbit search bound.
    pub max_n: Option<u32>,
}

/// Every class of [n, k]_q codes, with the census both unfiltered and under
/// the requested distance filters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    /// Sorted by canonical generator bytes.
    pub records: Vec<CodeClassRecord>,
    pub census_all: CensusTable,
    pub census: CensusTable,
}

pub fn classify(n: u32, k: u32, q: u32, filters: &Filters) -> Result<Classification> {
    classify_with(n, k, q, filters, &ClassifyOptions::default())
}

pub fn classify_with(
    n: u32,
    k: u32,
    q: u32,
    filters: &Filters,
    opts: &ClassifyOptions,
) -> Result<Classification> {
    let f = check_field(q)?;
    if filters.even || filters.self_orthogonal || filters.lcd {
        return Err(Error::domain(
            "classification filters are distance bounds only; types are reported per class",
        ));
    }
    let limit = opts
        .max_n
        .unwrap_or(0)
        .max(default_max_length(q))
        .min(MAX_ORBIT_LENGTH);
    if n > limit {
        return Err(Error::GuardExceeded {
            needed: Count::from(n as u64),
            limit: Count::from(limit as u64),
            unit: "coordinates (classification length)",
        });
    }
    if k > n {
        return Err(Error::domain(format!(
            "dimension k={k} exceeds length n={n}"
        )));
    }
    let guard = Count::from(MAX_STORED_FORMS);
    let total = gaussian_binomial(n as u64, k as u64, q as u64);
    if total > guard {
        return Err(Error::GuardExceeded {
            needed: total,
            limit: guard,
            unit: "stored canonical forms",
        });
    }

    let (nu, ku) = (n as usize, k as usize);
    let group = group_order(n, q);
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut reps: Vec<(Vec<u8>, Count, Count)> = Vec::new();
    let mut failure: Option<Error> = None;
    enumerate_rref(n, k, q, &guard, |m| {
        if failure.is_some() || seen.contains(m.data()) {
            return;
        }
        match orbit(f, ku, nu, m.data()) {
            Ok(o) => {
                let size = Count::from(o.members.len() as u64);
                if &size * &Count::from(o.stabilizer) != group {
                    failure = Some(Error::Mismatch(format!(
                        "orbit-stabilizer fails for {m:?}: {size} * {} != {group}",
                        o.stabilizer
                    )));
                    return;
                }
                let canon = o.members.iter().min().cloned().unwrap_or_default();
                seen.extend(o.members);
                reps.push((canon, Count::from(o.stabilizer), size));
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if Count::from(seen.len() as u64) != total {
        return Err(Error::Mismatch(format!(
            "orbits cover {} codes, expected {total}",
            seen.len()
        )));
    }
    reps.sort();

    let records = reps
        .into_par_iter()
        .map(|(canon, aut, size)| {
            let g = Matrix::new(f, ku, nu, canon)?;
            let code = Code::from_rref(g.clone())?;
            let hull = code.hull_dimension();
            Ok(CodeClassRecord {
                q,
                n,
                k,
                hull_dim: hull as u32,
                min_d: code.min_distance()?.map(|d| d as u32),
                dual_d: code.dual_distance()?.map(|d| d as u32),
                aut_order: aut,
                orbit_size: size,
                flags: TypeFlags {
                    even: (q == 2).then(|| code.is_even()).transpose()?,
                    self_orthogonal: hull == ku,
                    lcd: hull == 0,
                },
                canonical_generator: g,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Classification {
        q,
        n,
        k,
        census_all: CensusTable::from_records(q, n, k, 0, 0, &records),
        census: CensusTable::from_records(
            q,
            n,
            k,
            filters.min_distance,
            filters.min_dual_distance,
            &records,
        ),
        records,
    })
}

/// Outcome of the mass formula at one hull dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassCheck {
    pub l: u32,
    pub classes: u64,
    pub mass: Count,
    pub expected: Count,
    pub holds: bool,
}

/// Sums |G| / |Aut(C)| over the classes with hull dimension l and compares
/// with the closed-form count. The records must be unfiltered.
pub fn mass_formula_check(
    records: &[CodeClassRecord],
    n: u32,
    k: u32,
    l: u32,
    q: u32,
) -> Result<MassCheck> {
    let group = group_order(n, q);
    let mut mass = Count::zero();
    let mut classes = 0;
    for r in records.iter().filter(|r| r.hull_dim == l) {
        if (r.n, r.k, r.q) != (n, k, q) {
            return Err(Error::domain(
                "record parameters differ from the mass check's",
            ));
        }
        mass += &crate::qcomb::exact_div(&group, &r.aut_order)?;
        classes += 1;
    }
    let expected = sendrier_count(n, k, l, q)?;
    Ok(MassCheck {
        l,
        classes,
        holds: mass == expected,
        mass,
        expected,
    })
}

/// Number of LCD classes of [n, k] codes with any distances, from the counts
/// `b_star[(m, j)]` of LCD classes with d >= 2 and dual distance >= 2:
///
/// B(n, k) = sum_{m=k+1..n} B*(m, k) + B(n-1, k-1), with B(n, 0) = 1.
///
/// Stripping zero columns writes B(n, k) as a sum over m of the classes D(m,
/// k) with dual distance >= 2, and splitting off a weight-one word gives D(m,
/// k) = B*(m, k) + D(m-1, k-1).
pub fn lcd_length_recursion(n: u32, k: u32, b_star: &BTreeMap<(u32, u32), Count>) -> Result<Count> {
    if k == 0 {
        return Ok(Count::one());
    }
    if k > n {
        return Ok(Count::zero());
    }
    let mut total = lcd_length_recursion(n - 1, k - 1, b_star)?;
    for m in k + 1..=n {
        let v = b_star.get(&(m, k)).ok_or_else(|| {
            Error::domain(format!("missing B* entry for length {m}, dimension {k}"))
        })?;
        total += v;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    /// Unfiltered class counts by hull dimension.
    pub counts: Vec<u64>,
    /// min(B_0, B_1) > B_2 > ... > B_k on these counts.
    pub holds: bool,
}

/// Evaluates the conjectured chain of class counts; reported, not asserted.
pub fn conjecture_check(n: u32, k: u32, q: u32) -> Result<ConjectureReport> {
    if 2 * k > n {
        return Err(Error::domain(format!(
            "the chain concerns n >= 2k, got n={n}, k={k}"
        )));
    }
    let c = classify(n, k, q, &Filters::default())?;
    let counts: Vec<u64> = (0..=k)
        .map(|h| c.census_all.get(CodeType::Linear, h))
        .collect();
    Ok(ConjectureReport {
        q,
        n,
        k,
        holds: chain_holds(&counts),
        counts,
    })
}

/// min(B_0, B_1) > B_2 > ... > B_k; vacuous below three terms.
pub fn chain_holds(b: &[u64]) -> bool {
    if b.len() < 3 {
        return true;
    }
    let head = b[0].min(b[1]);
    head > b[2] && b[2..].windows(2).all(|w| w[0] > w[1])
}

/// Canonical generator packed row-major at ceil(log2 q) bits per entry,
/// most significant bit first, zero-padded to whole bytes, in hex.
pub fn pack_generator(m: &Matrix) -> String {
    let width = 32 - (m.field().order() - 1).leading_zeros();
    let mut bytes = Vec::new();
    let mut acc = 0u8;
    let mut used = 0;
    for &x in m.data() {
        for b in (0..width).rev() {
            acc = (acc << 1) | ((x >> b) & 1);
            used += 1;
            if used == 8 {
                bytes.push(acc);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        bytes.push(acc << (8 - used));
    }
    hex::encode(bytes)
}

/// One census export row per class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportRow {
    pub n: u32,
    pub k: u32,
    pub q: u32,
    pub hull_dim: u32,
    pub d: Option<u32>,
    pub dual_d: Option<u32>,
    pub even: Option<bool>,
    pub self_orthogonal: bool,
    pub lcd: bool,
    pub aut_order: Count,
    pub generator: String,
}

pub fn export_rows(records: &[CodeClassRecord]) -> Vec<ExportRow> {
    let mut rows: Vec<(Vec<u8>, ExportRow)> = records
        .iter()
        .map(|r| {
            (
                r.canonical_generator.data().to_vec(),
                ExportRow {
                    n: r.n,
                    k: r.k,
                    q: r.q,
                    hull_dim: r.hull_dim,
                    d: r.min_d,
                    dual_d: r.dual_d,
                    even: r.flags.even,
                    self_orthogonal: r.flags.self_orthogonal,
                    lcd: r.flags.lcd,
                    aut_order: r.aut_order.clone(),
                    generator: pack_generator(&r.canonical_generator),
                },
            )
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    rows.into_iter().map(|(_, r)| r).collect()
}
