//! Three explicit 6×6 families with closed-form `γ` coefficients, checked
//! term by term against the Pfaffian-ratio formula and the oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{gamma_map, gamma_oracle_c, gamma_terms, GammaOutput};
use crate::chains::FormalSum;
use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};
use crate::pfaffian::{SkewMatrix, SkewPlusMatrix};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AppendixTable {
    A1,
    A2,
    A3,
}

impl AppendixTable {
    pub const ALL: [AppendixTable; 3] = [AppendixTable::A1, AppendixTable::A2, AppendixTable::A3];

    /// Letters the matrix depends on.
    pub fn letters(self) -> &'static str {
        match self {
            AppendixTable::A1 => "abcde",
            AppendixTable::A2 => "abcd",
            AppendixTable::A3 => "abdef",
        }
    }

    /// Upper rows of the matrix, one letter per entry.
    fn upper_rows(self) -> [&'static str; 5] {
        match self {
            AppendixTable::A1 => ["aaaaa", "bbbb", "ccc", "dd", "e"],
            AppendixTable::A2 => ["ddddd", "dddd", "ddd", "ab", "c"],
            AppendixTable::A3 => ["abddd", "beee", "fff", "ab", "b"],
        }
    }

    pub fn rows(self) -> &'static [AppendixRow] {
        match self {
            AppendixTable::A1 => &TABLE_A1,
            AppendixTable::A2 => &TABLE_A2,
            AppendixTable::A3 => &TABLE_A3,
        }
    }

    /// The closed form of `Pf(A)`.
    pub fn stated_pfaffian(self, l: &Letters) -> Scalar {
        match self {
            AppendixTable::A1 => l.a() * l.c() * l.e(),
            AppendixTable::A2 => l.s() * l.d() * l.d(),
            AppendixTable::A3 => l.a() * l.p(),
        }
    }

    /// Scalars that must be units for the family to lie in Skew+_6.
    fn required_units(self, l: &Letters) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = self.letters().chars().map(|c| l.get(c).clone()).collect();
        match self {
            AppendixTable::A1 => {}
            AppendixTable::A2 => out.push(l.s()),
            AppendixTable::A3 => out.push(l.p()),
        }
        out
    }
}

impl fmt::Display for AppendixTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AppendixTable::A1 => "a1",
            AppendixTable::A2 => "a2",
            AppendixTable::A3 => "a3",
        })
    }
}

impl FromStr for AppendixTable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a1" => Ok(AppendixTable::A1),
            "a2" => Ok(AppendixTable::A2),
            "a3" => Ok(AppendixTable::A3),
            _ => Err(Error::Parse(format!("unknown table {s:?}"))),
        }
    }
}

/// Values of the letters `a..f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letters([Scalar; 6]);

impl Letters {
    pub fn new(values: [Scalar; 6]) -> Result<Self> {
        let f = values[0].field();
        if let Some(v) = values.iter().find(|v| v.field() != f) {
            return Err(Error::FieldMismatch(f, v.field()));
        }
        Ok(Letters(values))
    }

    pub fn from_i64(field: Field, values: [i64; 6]) -> Self {
        Letters(values.map(|v| field.from_i64(v)))
    }

    pub fn sample<R: Rng + ?Sized>(field: Field, rng: &mut R, bound: u64) -> Self {
        Letters(std::array::from_fn(|_| field.sample(rng, bound)))
    }

    pub fn field(&self) -> Field {
        self.0[0].field()
    }

    pub fn get(&self, name: char) -> &Scalar {
        &self.0[(name as u8 - b'a') as usize]
    }

    fn a(&self) -> &Scalar {
        &self.0[0]
    }
    fn b(&self) -> &Scalar {
        &self.0[1]
    }
    fn c(&self) -> &Scalar {
        &self.0[2]
    }
    fn d(&self) -> &Scalar {
        &self.0[3]
    }
    fn e(&self) -> &Scalar {
        &self.0[4]
    }
    fn f(&self) -> &Scalar {
        &self.0[5]
    }

    /// `a - b + c`.
    fn s(&self) -> Scalar {
        self.a() - self.b() + self.c()
    }

    /// `bd - be + af`.
    fn p(&self) -> Scalar {
        self.b() * self.d() - self.b() * self.e() + self.a() * self.f()
    }

    fn specialization(&self, names: &str) -> BTreeMap<String, String> {
        names.chars().map(|c| (c.to_string(), self.get(c).to_string())).collect()
    }

    /// Skew 3×3 matrix from three letters `(a12, a13, a23)`.
    fn skew3(&self, spec: &str) -> SkewMatrix {
        let upper: Vec<Scalar> = spec.chars().map(|c| self.get(c).clone()).collect();
        SkewMatrix::new(self.field(), 3, upper).expect("three entries")
    }
}

/// One table row: the triple, its signed coefficient and the letters of the
/// generator `[x, y, z]` (upper entries of a 3×3 matrix).
pub struct AppendixRow {
    pub triple: [usize; 3],
    pub coefficient: fn(&Letters) -> Scalar,
    pub generator: &'static str,
}

impl AppendixRow {
    pub fn generator_matrix(&self, l: &Letters) -> SkewMatrix {
        l.skew3(self.generator)
    }
}

/// `sign · Π num / Π den`. Panics on a zero denominator; callers check units.
fn frac(sign: i64, num: &[&Scalar], den: &[&Scalar]) -> Scalar {
    let f = num.first().or(den.first()).expect("nonempty").field();
    let n = num.iter().fold(f.from_i64(sign), |acc, x| acc * *x);
    let d = den.iter().fold(f.one(), |acc, x| acc * *x);
    n / d
}

macro_rules! row {
    ($i:literal $j:literal $k:literal, $coef:expr, $gen:literal) => {
        AppendixRow {
            triple: [$i, $j, $k],
            coefficient: $coef,
            generator: $gen,
        }
    };
}

static TABLE_A1: [AppendixRow; 20] = [
    row!(1 2 3, |l| frac(1, &[], &[l.b(), l.e(), l.e()]), "dde"),
    row!(1 2 4, |l| frac(-1, &[], &[l.b(), l.e(), l.e()]), "cce"),
    row!(1 3 4, |l| frac(1, &[l.c()], &[l.b(), l.b(), l.e(), l.e()]), "bbe"),
    row!(2 3 4, |l| frac(-1, &[l.c()], &[l.a(), l.a(), l.e(), l.e()]), "aae"),
    row!(1 2 5, |l| frac(1, &[], &[l.b(), l.d(), l.d()]), "ccd"),
    row!(1 3 5, |l| frac(-1, &[l.c()], &[l.b(), l.b(), l.d(), l.d()]), "bbd"),
    row!(2 3 5, |l| frac(1, &[l.c()], &[l.a(), l.a(), l.d(), l.d()]), "aad"),
    row!(1 4 5, |l| frac(1, &[], &[l.b(), l.b(), l.d()]), "bbc"),
    row!(2 4 5, |l| frac(-1, &[], &[l.a(), l.a(), l.d()]), "aac"),
    row!(3 4 5, |l| frac(1, &[], &[l.a(), l.a(), l.d()]), "aab"),
    row!(1 2 6, |l| frac(-1, &[], &[l.b(), l.d(), l.d()]), "ccd"),
    row!(1 3 6, |l| frac(1, &[l.c()], &[l.b(), l.b(), l.d(), l.d()]), "bbd"),
    row!(2 3 6, |l| frac(-1, &[l.c()], &[l.a(), l.a(), l.d(), l.d()]), "aad"),
    row!(1 4 6, |l| frac(-1, &[], &[l.b(), l.b(), l.d()]), "bbc"),
    row!(2 4 6, |l| frac(1, &[], &[l.a(), l.a(), l.d()]), "aac"),
    row!(3 4 6, |l| frac(-1, &[], &[l.a(), l.a(), l.d()]), "aab"),
    row!(1 5 6, |l| frac(1, &[l.e()], &[l.b(), l.b(), l.d(), l.d()]), "bbc"),
    row!(2 5 6, |l| frac(-1, &[l.e()], &[l.a(), l.a(), l.d(), l.d()]), "aac"),
    row!(3 5 6, |l| frac(1, &[l.e()], &[l.a(), l.a(), l.d(), l.d()]), "aab"),
    row!(4 5 6, |l| frac(-1, &[l.e()], &[l.a(), l.a(), l.c(), l.c()]), "aab"),
];

static TABLE_A2: [AppendixRow; 20] = [
    row!(1 2 3, |l| frac(1, &[], &[l.d(), &l.s(), &l.s()]), "abc"),
    row!(1 2 4, |l| frac(-1, &[], &[l.c(), l.c(), l.d()]), "ddc"),
    row!(1 3 4, |l| frac(1, &[], &[l.c(), l.c(), l.d()]), "ddc"),
    row!(2 3 4, |l| frac(-1, &[], &[l.c(), l.c(), l.d()]), "ddc"),
    row!(1 2 5, |l| frac(1, &[], &[l.b(), l.b(), l.d()]), "ddb"),
    row!(1 3 5, |l| frac(-1, &[], &[l.b(), l.b(), l.d()]), "ddb"),
    row!(2 3 5, |l| frac(1, &[], &[l.b(), l.b(), l.d()]), "ddb"),
    row!(1 4 5, |l| frac(1, &[&l.s()], &[l.b(), l.c(), l.d(), l.d()]), "ddd"),
    row!(2 4 5, |l| frac(-1, &[&l.s()], &[l.b(), l.c(), l.d(), l.d()]), "ddd"),
    row!(3 4 5, |l| frac(1, &[&l.s()], &[l.b(), l.c(), l.d(), l.d()]), "ddd"),
    row!(1 2 6, |l| frac(-1, &[], &[l.a(), l.a(), l.d()]), "dda"),
    row!(1 3 6, |l| frac(1, &[], &[l.a(), l.a(), l.d()]), "dda"),
    row!(2 3 6, |l| frac(-1, &[], &[l.a(), l.a(), l.d()]), "dda"),
    row!(1 4 6, |l| frac(-1, &[&l.s()], &[l.a(), l.c(), l.d(), l.d()]), "ddd"),
    row!(2 4 6, |l| frac(1, &[&l.s()], &[l.a(), l.c(), l.d(), l.d()]), "ddd"),
    row!(3 4 6, |l| frac(-1, &[&l.s()], &[l.a(), l.c(), l.d(), l.d()]), "ddd"),
    row!(1 5 6, |l| frac(1, &[&l.s()], &[l.a(), l.b(), l.d(), l.d()]), "ddd"),
    row!(2 5 6, |l| frac(-1, &[&l.s()], &[l.a(), l.b(), l.d(), l.d()]), "ddd"),
    row!(3 5 6, |l| frac(1, &[&l.s()], &[l.a(), l.b(), l.d(), l.d()]), "ddd"),
    row!(4 5 6, |l| frac(-1, &[&l.s()], &[l.d(), l.d(), l.d(), l.d()]), "ddd"),
];

static TABLE_A3: [AppendixRow; 20] = [
    row!(1 2 3, |l| frac(1, &[&l.p()], &[l.a(), l.a(), l.d(), l.e(), l.f()]), "abb"),
    row!(1 2 4, |l| frac(-1, &[&l.p()], &[l.b(), l.b(), l.b(), l.b(), l.f()]), "ffb"),
    row!(1 3 4, |l| frac(1, &[&l.p()], &[l.a(), l.b(), l.b(), l.b(), l.e()]), "eeb"),
    row!(2 3 4, |l| frac(-1, &[&l.p()], &[l.a(), l.b(), l.b(), l.b(), l.d()]), "ddb"),
    row!(1 2 5, |l| frac(1, &[&l.p()], &[l.b(), l.b(), l.b(), l.b(), l.f()]), "ffb"),
    row!(1 3 5, |l| frac(-1, &[&l.p()], &[l.a(), l.b(), l.b(), l.b(), l.e()]), "eeb"),
    row!(2 3 5, |l| frac(1, &[&l.p()], &[l.a(), l.b(), l.b(), l.b(), l.d()]), "ddb"),
    row!(1 4 5, |l| frac(1, &[l.a()], &[l.b(), l.b(), l.b(), l.b()]), "bef"),
    row!(2 4 5, |l| frac(-1, &[l.a()], &[l.b(), l.b(), l.b(), l.b()]), "bdf"),
    row!(3 4 5, |l| frac(1, &[], &[l.a(), l.b(), l.b()]), "ade"),
    row!(1 2 6, |l| frac(-1, &[&l.p()], &[l.a(), l.a(), l.b(), l.b(), l.f()]), "ffa"),
    row!(1 3 6, |l| frac(1, &[&l.p()], &[l.a(), l.a(), l.a(), l.b(), l.e()]), "eea"),
    row!(2 3 6, |l| frac(-1, &[&l.p()], &[l.a(), l.a(), l.a(), l.b(), l.d()]), "dda"),
    row!(1 4 6, |l| frac(-1, &[], &[l.b(), l.b(), l.b()]), "bef"),
    row!(2 4 6, |l| frac(1, &[], &[l.b(), l.b(), l.b()]), "bdf"),
    row!(3 4 6, |l| frac(-1, &[], &[l.a(), l.a(), l.b()]), "ade"),
    row!(1 5 6, |l| frac(1, &[], &[l.b(), l.b(), l.b()]), "bef"),
    row!(2 5 6, |l| frac(-1, &[], &[l.b(), l.b(), l.b()]), "bdf"),
    row!(3 5 6, |l| frac(1, &[], &[l.a(), l.a(), l.b()]), "ade"),
    row!(4 5 6, |l| frac(-1, &[l.a()], &[&l.p(), &l.p()]), "abb"),
];

/// The 6×6 matrix of a family at the given letter values (not certified).
pub fn appendix_matrix(table: AppendixTable, l: &Letters) -> SkewMatrix {
    let rows: Vec<Vec<Scalar>> = table
        .upper_rows()
        .iter()
        .map(|r| r.chars().map(|c| l.get(c).clone()).collect())
        .collect();
    SkewMatrix::from_upper_rows(l.field(), &rows).expect("well-formed rows")
}

/// The collected seven-term form of `γ` on the first family:
/// contributions to `[c,c,d]`, `[b,b,d]` and `[a,a,d]` cancel.
pub fn a1_collapsed(l: &Letters) -> Result<GammaOutput> {
    let (a, b, c, d, e) = (l.a(), l.b(), l.c(), l.d(), l.e());
    for x in [a, b, c, d, e] {
        if x.is_zero() {
            return Err(Error::ZeroUnit);
        }
    }
    let g = |s: &str| l.skew3(s).certify();
    Ok(FormalSum::from_terms([
        (g("aab")?, frac(1, &[e], &[a, a, d, d]) - frac(1, &[e], &[a, a, c, c])),
        (g("aac")?, frac(-1, &[e], &[a, a, d, d])),
        (g("aae")?, frac(-1, &[c], &[a, a, e, e])),
        (g("bbc")?, frac(1, &[e], &[b, b, d, d])),
        (g("bbe")?, frac(1, &[c], &[b, b, e, e])),
        (g("dde")?, frac(1, &[], &[b, e, e])),
        (g("cce")?, frac(-1, &[], &[b, e, e])),
    ]))
}

/// Pairwise distinct letters and `c^2 != d^2`: the seven generators above
/// are distinct and all seven coefficients are nonzero.
fn a1_generic(l: &Letters) -> bool {
    let xs = [l.a(), l.b(), l.c(), l.d(), l.e()];
    let distinct = (0..5).all(|i| (i + 1..5).all(|j| xs[i] != xs[j]));
    distinct && l.c() * l.c() != l.d() * l.d()
}

/// Draws rejected before giving up on one trial.
const MAX_RESAMPLES: usize = 1000;

fn sample_letters<R: Rng + ?Sized>(
    table: AppendixTable,
    field: Field,
    rng: &mut R,
    bound: u64,
) -> Result<(Letters, SkewPlusMatrix)> {
    for _ in 0..MAX_RESAMPLES {
        let l = Letters::sample(field, rng, bound);
        if table.required_units(&l).iter().any(Scalar::is_zero) {
            continue;
        }
        if table == AppendixTable::A1 && !a1_generic(&l) {
            continue;
        }
        if let Ok(a) = appendix_matrix(table, &l).certify() {
            return Ok((l, a));
        }
    }
    Err(Error::SamplerExhausted {
        attempts: MAX_RESAMPLES,
    })
}

fn check_one(table: AppendixTable, l: &Letters, a: &SkewPlusMatrix, report: &mut Report) -> Result<()> {
    let spec = l.specialization(table.letters());
    report.check_eq(None, &spec, &table.stated_pfaffian(l), &a.pf()?);
    let terms = gamma_terms(a)?;
    for row in table.rows() {
        let t = Some(row.triple);
        let term = terms
            .iter()
            .find(|x| x.triple == row.triple)
            .ok_or_else(|| Error::InternalInvariant(format!("no term for {:?}", row.triple)))?;
        let expected = (row.coefficient)(l);
        report.check_eq(t, &spec, &expected, &term.coefficient);
        report.check_eq(t, &spec, &row.generator_matrix(l), term.generator.inner());
        // independent route: signed oracle coefficient
        let c = gamma_oracle_c(a, row.triple)?;
        let [i, j, k] = row.triple;
        let signed = if (i + j + k) % 2 == 0 { c } else { -c };
        report.check_eq(t, &spec, &expected, &signed);
    }
    if table == AppendixTable::A1 {
        let collapsed = a1_collapsed(l)?;
        let full = gamma_map(a)?;
        report.check_eq(None, &spec, &collapsed, &full);
        report.check(full.len() == 7, "seven distinct generators", &spec);
    }
    Ok(())
}

/// Check every row of a table on `trials` random specializations.
pub fn verify_appendix<R: Rng + ?Sized>(
    table: AppendixTable,
    field: Field,
    trials: usize,
    bound: u64,
    rng: &mut R,
) -> Report {
    let start = Instant::now();
    let mut report = Report::new(format!("appendix-{table}"), field, trials);
    for _ in 0..trials {
        match sample_letters(table, field, rng, bound) {
            Ok((l, a)) => {
                if let Err(e) = check_one(table, &l, &a, &mut report) {
                    report.error(e, &l.specialization(table.letters()));
                }
            }
            Err(e) => report.error(e, &BTreeMap::new()),
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    report
}
