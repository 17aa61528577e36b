//! ADE root lattices, fiber contributions to the height pairing, Niemeier root
//! systems and the enumeration of `A₂²` complements.
//!
//! Lattices are negative definite: Gram matrices have `−2` on the diagonal and `+1`
//! for each edge of the Dynkin diagram.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tate::FiberConfiguration;

/// An irreducible root lattice `A_n` (n ≥ 1), `D_n` (n ≥ 4) or `E_n` (n = 6, 7, 8).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum RootLabel {
    A(u32),
    D(u32),
    E(u32),
}

impl RootLabel {
    pub fn new(family: char, n: u32) -> Result<RootLabel> {
        let l = match family {
            'A' => RootLabel::A(n),
            'D' => RootLabel::D(n),
            'E' => RootLabel::E(n),
            other => return Err(Error::InvalidLabel(format!("unknown family {other}"))),
        };
        l.validate()?;
        Ok(l)
    }

    fn validate(self) -> Result<()> {
        let ok = match self {
            RootLabel::A(n) => n >= 1,
            RootLabel::D(n) => n >= 4,
            RootLabel::E(n) => (6..=8).contains(&n),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLabel(self.to_string()))
        }
    }

    pub fn rank(self) -> u32 {
        match self {
            RootLabel::A(n) | RootLabel::D(n) | RootLabel::E(n) => n,
        }
    }

    /// `A_11`, `A11`, `D_{10}`, `E7`.
    pub fn parse(s: &str) -> Result<RootLabel> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(|| Error::InvalidLabel("empty label".into()))?;
        let digits: String = chars.filter(|c| !matches!(c, '_' | '{' | '}')).collect();
        let n: u32 = digits.parse().map_err(|_| Error::InvalidLabel(s.to_string()))?;
        RootLabel::new(family, n)
    }

    /// Edges of the Dynkin diagram on nodes `0..rank`.
    fn edges(self) -> Vec<(usize, usize)> {
        let n = self.rank() as usize;
        match self {
            RootLabel::A(_) => (1..n).map(|k| (k - 1, k)).collect(),
            RootLabel::D(_) => {
                // chain 0 – 1 – … – (n−2), and n−1 attached to n−3
                let mut e: Vec<(usize, usize)> = (1..n - 1).map(|k| (k - 1, k)).collect();
                e.push((n - 3, n - 1));
                e
            }
            RootLabel::E(_) => {
                // chain 0 – 1 – … – (n−2), and n−1 attached to node 2
                let mut e: Vec<(usize, usize)> = (1..n - 1).map(|k| (k - 1, k)).collect();
                e.push((2, n - 1));
                e
            }
        }
    }

    /// Closed form of the signed determinant.
    pub fn det_formula(self) -> i64 {
        let sign = |n: u32| if n.is_multiple_of(2) { 1 } else { -1 };
        match self {
            RootLabel::A(n) => sign(n) * (n as i64 + 1),
            RootLabel::D(n) => sign(n) * 4,
            RootLabel::E(6) => 3,
            RootLabel::E(7) => -2,
            RootLabel::E(_) => 1,
        }
    }
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLabel::A(n) => write!(f, "A{n}"),
            RootLabel::D(n) => write!(f, "D{n}"),
            RootLabel::E(n) => write!(f, "E{n}"),
        }
    }
}

impl Serialize for RootLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A multiset of root lattices, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct RootSystem(Vec<RootLabel>);

impl RootSystem {
    pub fn new(mut labels: Vec<RootLabel>) -> RootSystem {
        labels.sort();
        RootSystem(labels)
    }

    pub fn empty() -> RootSystem {
        RootSystem(Vec::new())
    }

    pub fn labels(&self) -> &[RootLabel] {
        &self.0
    }

    pub fn rank(&self) -> u32 {
        self.0.iter().map(|l| l.rank()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `A_1^2 A_4 D_5`, `A1^2A4D5`, `0` (the empty system). `A_0` terms are dropped.
    pub fn parse(s: &str) -> Result<RootSystem> {
        let s: String = s.chars().filter(|c| !c.is_whitespace() && !matches!(c, '_' | '{' | '}' | '$')).collect();
        if s == "0" || s.is_empty() {
            return Ok(RootSystem::empty());
        }
        let chars: Vec<char> = s.chars().collect();
        let mut out = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            let family = chars[k];
            k += 1;
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let n: u32 =
                chars[start..k].iter().collect::<String>().parse().map_err(|_| Error::InvalidLabel(s.clone()))?;
            let mut power = 1;
            if k < chars.len() && chars[k] == '^' {
                k += 1;
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                power =
                    chars[start..k].iter().collect::<String>().parse().map_err(|_| Error::InvalidLabel(s.clone()))?;
            }
            if family == 'A' && n == 0 {
                continue;
            }
            let label = RootLabel::new(family, n)?;
            out.extend(std::iter::repeat_n(label, power));
        }
        Ok(RootSystem::new(out))
    }

    /// Distinct labels with multiplicities, in sorted order.
    pub fn factors(&self) -> Vec<(RootLabel, usize)> {
        let mut m: BTreeMap<RootLabel, usize> = BTreeMap::new();
        for l in &self.0 {
            *m.entry(*l).or_default() += 1;
        }
        m.into_iter().collect()
    }

    fn union(&self, other: &RootSystem) -> RootSystem {
        RootSystem::new(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    fn without_one(&self, l: RootLabel) -> RootSystem {
        let mut v = self.0.clone();
        let pos = v.iter().position(|x| *x == l).expect("label present");
        v.remove(pos);
        RootSystem(v)
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.factors().into_iter().map(|(l, k)| if k == 1 { l.to_string() } else { format!("{l}^{k}") }).collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for RootSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The Gram matrix of the Dynkin diagram.
pub fn gram(label: RootLabel) -> Result<Vec<Vec<i64>>> {
    label.validate()?;
    let n = label.rank() as usize;
    let mut g = vec![vec![0i64; n]; n];
    for (k, row) in g.iter_mut().enumerate() {
        row[k] = -2;
    }
    for (a, b) in label.edges() {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    Ok(g)
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                None => return 0,
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

pub fn gram_det(label: RootLabel) -> Result<i64> {
    Ok(bareiss_det(&gram(label)?))
}

/// The correction `contr_ν(P, Q)` for sections meeting components `i` and `j` of a
/// fiber with root lattice `label`.
///
/// Component indices follow [`crate::tate`]: `I_n` fibers are numbered cyclically
/// `0..n`; on `I_n*` (`D_{n+4}`) the near simple component is 1 and the far ones are
/// `n + 3`, `n + 4`; on `IV*` the non-identity simple components are 5 and 6; on
/// `III*` it is 6. Index 0 is the identity component.
pub fn contribution(label: RootLabel, i: u32, j: u32) -> Result<Rational64> {
    let r = |a: i64, b: i64| Rational64::new(a, b);
    if i == 0 || j == 0 {
        return Ok(r(0, 1));
    }
    let (i, j) = (i.min(j), i.max(j));
    let bad = || Error::InvalidComponent(format!("components {i}, {j} on {label}"));
    match label {
        RootLabel::A(rank) => {
            let n = rank as i64 + 1;
            if j as i64 >= n {
                return Err(bad());
            }
            Ok(r(i as i64 * (n - j as i64), n))
        }
        RootLabel::E(6) => match (i, j) {
            (5, 5) | (6, 6) => Ok(r(4, 3)),
            (5, 6) => Ok(r(2, 3)),
            _ => Err(bad()),
        },
        RootLabel::E(7) => match (i, j) {
            (6, 6) => Ok(r(3, 2)),
            _ => Err(bad()),
        },
        RootLabel::E(_) => Err(bad()),
        RootLabel::D(rank) => {
            let n = rank as i64 - 4;
            let far = [n as u32 + 3, n as u32 + 4];
            let near = 1;
            if i == near && j == near {
                Ok(r(1, 1))
            } else if i == near && far.contains(&j) {
                Ok(r(1, 2))
            } else if far.contains(&i) && i == j {
                Ok(r(1, 1) + r(n, 4))
            } else if far.contains(&i) && far.contains(&j) {
                Ok(r(1, 2) + r(n, 4))
            } else {
                Err(bad())
            }
        }
    }
}

/// The simple non-identity components of a fiber type with root lattice `label`.
pub fn simple_components(label: RootLabel) -> Vec<u32> {
    match label {
        RootLabel::A(n) => (1..=n).collect(),
        RootLabel::D(n) => vec![1, n - 1, n],
        RootLabel::E(6) => vec![5, 6],
        RootLabel::E(7) => vec![6],
        RootLabel::E(_) => Vec::new(),
    }
}

/// One row of the printed complement table: `label`, `A₂^⊥`, `(A₂²)^⊥`.
pub struct ComplementRow {
    pub family: &'static str,
    pub a2: &'static str,
    pub a2sq: &'static str,
}

/// The complement table as printed, ten rows. A `0` in the last column also stands
/// for "no embedding" (A₂, A₃, D₄, D₅ do not contain `A₂²`).
pub const COMPLEMENT_TABLE: [ComplementRow; 10] = [
    ComplementRow { family: "A2", a2: "0", a2sq: "0" },
    ComplementRow { family: "A3", a2: "0", a2sq: "0" },
    ComplementRow { family: "An (n>3)", a2: "A(n-3)", a2sq: "A(n-6) for n>6 (0 for A5, A6)" },
    ComplementRow { family: "D4", a2: "0", a2sq: "0" },
    ComplementRow { family: "D5", a2: "A1^2", a2sq: "0" },
    ComplementRow { family: "D6", a2: "A3", a2sq: "0" },
    ComplementRow { family: "Dn (n>6)", a2: "D(n-3)", a2sq: "D(n-6) for n>9 (0 for D7, A1^2 for D8, A3 for D9)" },
    ComplementRow { family: "E6", a2: "A2^2", a2sq: "A2" },
    ComplementRow { family: "E7", a2: "A5", a2sq: "A2" },
    ComplementRow { family: "E8", a2: "E6", a2sq: "A2^2" },
];

/// Root system of the orthogonal complement of `A₂` in `label`; `None` if `A₂` does
/// not embed.
pub fn a2_complement(label: RootLabel) -> Option<RootSystem> {
    let sys = |s: &str| RootSystem::parse(s).expect("static table");
    match label {
        RootLabel::A(1) => None,
        RootLabel::A(n) if n <= 3 => Some(RootSystem::empty()),
        RootLabel::A(n) => Some(RootSystem::new(vec![RootLabel::A(n - 3)])),
        RootLabel::D(4) => Some(RootSystem::empty()),
        RootLabel::D(5) => Some(sys("A1^2")),
        RootLabel::D(6) => Some(sys("A3")),
        RootLabel::D(n) => Some(RootSystem::new(vec![RootLabel::D(n - 3)])),
        RootLabel::E(6) => Some(sys("A2^2")),
        RootLabel::E(7) => Some(sys("A5")),
        RootLabel::E(_) => Some(sys("E6")),
    }
}

/// Complement of `A₂` inside a root system: embed into one factor of each isomorphism
/// type that admits it. Each embedding is unique up to automorphisms of the factor.
fn a2_complements_in(sys: &RootSystem) -> Vec<RootSystem> {
    let mut out = Vec::new();
    for (l, _) in sys.factors() {
        if let Some(c) = a2_complement(l) {
            out.push(sys.without_one(l).union(&c));
        }
    }
    out
}

/// Root system of the complement of `A₂²` inside one factor, computed by removing
/// `A₂` twice; `None` if `A₂²` does not embed.
pub fn a2sq_complement(label: RootLabel) -> Option<RootSystem> {
    let first = a2_complement(label)?;
    let mut cands = a2_complements_in(&first);
    cands.sort();
    cands.dedup();
    match cands.len() {
        0 => None,
        1 => cands.pop(),
        _ => panic!("A2^2 complement in {label} is not unique"),
    }
}

/// The 23 root systems of Niemeier lattices, in the printed order.
pub const NIEMEIER: [&str; 23] = [
    "A1^24", "A2^12", "A3^8", "A4^6", "A5^4D4", "D4^6", "A6^4", "A7^2D5^2", "A8^3", "A9^2D6", "D6^4", "E6^4",
    "A11D7E6", "A12^2", "D8^3", "A15D9", "A17E7", "D10E7^2", "D12^2", "A24", "D16E8", "E8^3", "D24",
];

pub fn niemeier_roots() -> Vec<RootSystem> {
    NIEMEIER.iter().map(|s| RootSystem::parse(s).expect("static table")).collect()
}

/// One extraction of `A₂²` from a Niemeier root system.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FibrationLattice {
    pub source: RootSystem,
    /// Positions (1-based, in the source's printed factor order) the `A₂`s came from.
    pub code: String,
    pub roots: RootSystem,
    pub mw_rank: u32,
}

/// The extraction table as printed: `(source in printed factor order, code, roots, MW rank)`.
pub const EXTRACTION_TABLE: [(&str, &str, &str, u32); 52] = [
    ("A2^12", "", "A2^10", 0),
    ("A3^8", "", "A3^6", 2),
    ("A4^6", "", "A1^2 A4^4", 2),
    ("D4^6", "", "D4^4", 4),
    ("D4 A5^4", "12", "A2 A5^3", 3),
    ("D4 A5^4", "2", "D4 A5^3", 1),
    ("D4 A5^4", "22", "A2^2 D4 A5^2", 2),
    ("A6^4", "1", "A6^3", 2),
    ("A6^4", "11", "A3^2 A6^2", 2),
    ("D5^2 A7^2", "11", "A1^4 A7^2", 2),
    ("D5^2 A7^2", "2", "A1 D5^2 A7", 2),
    ("D5^2 A7^2", "12", "A1^2 A4 D5 A7", 2),
    ("D5^2 A7^2", "22", "A4^2 D5^2", 2),
    ("A8^3", "1", "A2 A8^2", 2),
    ("A8^3", "11", "A5^2 A8", 2),
    ("D6^4", "1", "D6^3", 2),
    ("D6^4", "11", "A3^2 D6^2", 2),
    ("D6 A9^2", "1", "A9^2", 2),
    ("D6 A9^2", "2", "A3 D6 A9", 2),
    ("D6 A9^2", "12", "A3 A6 A9", 2),
    ("D6 A9^2", "22", "A6^2 D6", 2),
    ("E6^4", "1", "A2 E6^3", 0),
    ("E6^4", "11", "A2^4 E6^2", 0),
    ("E6 D7 A11", "1", "A2 D7 A11", 0),
    ("E6 D7 A11", "2", "E6 A11", 3),
    ("E6 D7 A11", "12", "A2^2 D4 A11", 1),
    ("E6 D7 A11", "3", "E6 D7 A8", 2),
    ("E6 D7 A11", "13", "A2^2 D7 A8", 1),
    ("E6 D7 A11", "23", "D4 E6 A8", 2),
    ("A12^2", "1", "A6 A12", 2),
    ("A12^2", "11", "A9^2", 2),
    ("D8^3", "1", "A1^2 D8^2", 2),
    ("D8^3", "11", "D5^2 D8", 2),
    ("D9 A15", "1", "A3 A15", 2),
    ("D9 A15", "2", "A9 D9", 2),
    ("D9 A15", "12", "D6 A12", 2),
    ("E7 A17", "1", "A2 A17", 1),
    ("E7 A17", "2", "E7 A11", 2),
    ("E7 A17", "12", "A5 A14", 1),
    ("E7^2 D10", "1", "A2 E7 D10", 1),
    ("E7^2 D10", "11", "A5^2 D10", 0),
    ("E7^2 D10", "2", "D4 E7^2", 2),
    ("E7^2 D10", "12", "A5 D7 E7", 1),
    ("D12^2", "1", "D6 D12", 2),
    ("D12^2", "11", "D9^2", 2),
    ("E8^3", "1", "A2^2 E8^2", 0),
    ("E8^3", "11", "E6^2 E8", 0),
    ("E8 D16", "1", "A2^2 D16", 0),
    ("E8 D16", "2", "E8 D10", 2),
    ("E8 D16", "12", "E6 D13", 1),
    ("A24", "", "A18", 2),
    ("D24", "", "D18", 2),
];

/// The printed extraction table as data.
pub fn extraction_table() -> Vec<FibrationLattice> {
    EXTRACTION_TABLE
        .iter()
        .map(|(src, code, roots, rank)| FibrationLattice {
            source: RootSystem::parse(src).expect("static table"),
            code: code.to_string(),
            roots: RootSystem::parse(roots).expect("static table"),
            mw_rank: *rank,
        })
        .collect()
}

/// Extract `A₂²` from every Niemeier root system in every way: both copies from one
/// factor (`m:`), or one copy from each of two factors (`mn:`), one extraction per
/// unordered choice of factor types. MW rank is `20 − rank(roots)`.
///
/// Factor positions in `code` refer to the distinct labels of the source in sorted
/// order; [`compare_with_table`] matches rows up to that renumbering.
pub fn enumerate_fibration_lattices() -> Vec<FibrationLattice> {
    let mut out = Vec::new();
    for source in niemeier_roots() {
        let factors = source.factors();
        for (a, (la, ka)) in factors.iter().enumerate() {
            if let Some(c) = a2sq_complement(*la) {
                let roots = source.without_one(*la).union(&c);
                out.push(row(&source, format!("{}", a + 1), roots));
            }
            let Some(ca) = a2_complement(*la) else { continue };
            for (b, (lb, _)) in factors.iter().enumerate().skip(a) {
                if b == a && *ka < 2 {
                    continue;
                }
                let Some(cb) = a2_complement(*lb) else { continue };
                let roots = source.without_one(*la).without_one(*lb).union(&ca).union(&cb);
                out.push(row(&source, format!("{}{}", a + 1, b + 1), roots));
            }
        }
    }
    out
}

fn row(source: &RootSystem, code: String, roots: RootSystem) -> FibrationLattice {
    let mw_rank = 20 - roots.rank();
    FibrationLattice { source: source.clone(), code, roots, mw_rank }
}

/// A printed row whose roots are inconsistent with its own MW rank, paired with the
/// computed row it should have been.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TableErratum {
    pub printed: FibrationLattice,
    pub computed: FibrationLattice,
}

/// Outcome of matching computed rows against the printed table on
/// (source, roots, MW rank).
#[derive(Clone, Debug, Default, Serialize)]
pub struct TableComparison {
    pub matched: usize,
    pub errata: Vec<TableErratum>,
    /// Printed rows with no computed counterpart.
    pub missing: Vec<FibrationLattice>,
    /// Computed rows with no printed counterpart.
    pub extra: Vec<FibrationLattice>,
}

impl TableComparison {
    pub fn is_consistent(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Match rows exactly; then pair each unmatched printed row with `rank + MW rank ≠ 20`
/// to an unmatched computed row with the same source and MW rank, as an erratum.
pub fn compare_with_table(computed: &[FibrationLattice]) -> TableComparison {
    let key = |r: &FibrationLattice| (r.source.clone(), r.roots.clone(), r.mw_rank);
    let mut printed = extraction_table();
    let mut out = TableComparison::default();
    let mut extra = Vec::new();
    for r in computed {
        match printed.iter().position(|p| key(p) == key(r)) {
            Some(k) => {
                printed.remove(k);
                out.matched += 1;
            }
            None => extra.push(r.clone()),
        }
    }
    for p in printed {
        let pair = (p.roots.rank() + p.mw_rank != 20)
            .then(|| extra.iter().position(|c| c.source == p.source && c.mw_rank == p.mw_rank))
            .flatten();
        match pair {
            Some(k) => out.errata.push(TableErratum { printed: p, computed: extra.remove(k) }),
            None => out.missing.push(p),
        }
    }
    out.extra = extra;
    out
}

/// Rank `2 + Σ(m_ν − 1)` and signed discriminant `−Π det(root lattice)` of the trivial
/// lattice (the hyperbolic plane contributes `−1`).
pub fn trivial_lattice(cfg: &FiberConfiguration) -> (u32, i64) {
    let mut rank = 2;
    let mut disc = -1i64;
    for f in &cfg.fibers {
        rank += f.component_count() - 1;
        if let Some(l) = f.lattice_label() {
            disc *= l.det_formula();
        }
    }
    (rank, disc)
}

/// `ρ − 2 − Σ(m_ν − 1)`.
pub fn shioda_tate_mw_rank(cfg: &FiberConfiguration, rho: u32) -> Result<u32> {
    let (rank, _) = trivial_lattice(cfg);
    rho.checked_sub(rank).ok_or_else(|| Error::Inconsistent(format!("trivial lattice rank {rank} exceeds rho = {rho}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(gram_det(RootLabel::A(2)).unwrap(), 3);
        assert_eq!(gram_det(RootLabel::E(7)).unwrap(), -2);
        assert_eq!(gram_det(RootLabel::D(7)).unwrap(), -4);
        assert!(gram(RootLabel::D(3)).is_err());
    }

    #[test]
    fn contributions() {
        assert_eq!(contribution(RootLabel::A(11), 3, 3).unwrap(), Rational64::new(9, 4));
        assert_eq!(contribution(RootLabel::E(7), 6, 6).unwrap(), Rational64::new(3, 2));
        assert_eq!(contribution(RootLabel::D(10), 10, 10).unwrap(), Rational64::new(5, 2));
        assert_eq!(contribution(RootLabel::D(10), 9, 10).unwrap(), Rational64::new(2, 1));
        assert!(contribution(RootLabel::E(8), 1, 1).is_err());
    }

    #[test]
    fn root_system_text() {
        let r = RootSystem::parse("A_1^2 A_4 D_5 A_7").unwrap();
        assert_eq!(r.to_string(), "A1^2 A4 A7 D5");
        assert_eq!(r.rank(), 18);
        assert_eq!(RootSystem::parse("0").unwrap(), RootSystem::empty());
    }

    #[test]
    fn complements() {
        let s = |x: &str| RootSystem::parse(x).unwrap();
        assert_eq!(a2_complement(RootLabel::E(8)), Some(s("E6")));
        assert_eq!(a2sq_complement(RootLabel::E(8)), Some(s("A2^2")));
        assert_eq!(a2sq_complement(RootLabel::D(8)), Some(s("A1^2")));
        assert_eq!(a2sq_complement(RootLabel::D(5)), None);
        assert_eq!(a2_complement(RootLabel::A(2)), Some(RootSystem::empty()));
    }
}

#[cfg(test)]
mod enumeration_tests {
    use super::*;

    #[test]
    fn enumeration_matches_printed_rows() {
        let rows = enumerate_fibration_lattices();
        assert_eq!(rows.len(), 52);
        let cmp = compare_with_table(&rows);
        assert!(cmp.is_consistent(), "{cmp:?}");
        assert_eq!(cmp.matched, 51);
        // A11 loses A2^2 to A5; the printed A8 would need rank 21
        assert_eq!(cmp.errata.len(), 1);
        assert_eq!(cmp.errata[0].computed.roots, RootSystem::parse("A5 D7 E6").unwrap());
        assert_eq!(cmp.errata[0].printed.roots, RootSystem::parse("A8 D7 E6").unwrap());
    }
}
