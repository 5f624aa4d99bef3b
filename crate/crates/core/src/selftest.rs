//! The built-in check suite run by `semimagic selftest`.
//!
//! Each check compares library output against fixed reference values and
//! reports pass or fail with a short detail line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::generate;
use crate::construct::{build, build_blocks, expected_constant};
use crate::fixtures;
use crate::group::{Dihedral, DihedralElement};
use crate::io;
use crate::power::{parse_power_text, Kind, PowerSquares};
use crate::search::{self, OutcomeKind, Order4};
use crate::verify::{self, diagonal_starts, OrderingClass};

#[derive(Clone, Debug)]
pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

fn power_against_reference(base: &str, files: [&str; 3], sums: [i64; 3]) -> Outcome {
    let base = crate::IntMagicSquare::from_text(base).map_err(err)?;
    let ps = PowerSquares::build(&base);
    for (kind, text) in [Kind::E, Kind::O, Kind::T].into_iter().zip(files) {
        let (_, rows) = parse_power_text(text).map_err(err)?;
        ensure(ps.rows(kind) == rows, || format!("{kind} differs from reference"))?;
    }
    ensure(ps.sums() == sums, || format!("sums {:?}, expected {sums:?}", ps.sums()))?;
    ensure(ps.check_sums().ok, || "a line sum deviates".into())?;
    Ok(format!("E, O, T match; sums {sums:?}"))
}

fn power_m4() -> Outcome {
    power_against_reference(fixtures::BASE_M4, fixtures::POWER_M4, [4, 8, 0])
}

fn power_m5() -> Outcome {
    power_against_reference(fixtures::BASE_M5, fixtures::POWER_M5, [30, 35, 35])
}

fn all_lines_equal(r: &verify::VerificationReport, mu: DihedralElement) -> bool {
    r.row_products.iter().chain(&r.col_products).all(|p| *p == mu)
}

fn side8() -> Outcome {
    let q = build(4, 0, Some(&fixtures::base_m4())).map_err(err)?;
    ensure(io::serialize_text(&q) == fixtures::D32_SIDE8, || "text differs from reference".into())?;
    let starts = diagonal_starts(4);
    let r = verify::semicircular_products(&q, 4, &starts, &starts).map_err(err)?;
    let mu = Dihedral::new(32).map_err(err)?.rotation(8);
    ensure(r.is_semi_magic() && all_lines_equal(&r, mu), || format!("constant {:?}", r.magic_constant))?;
    Ok("byte-identical; r^8 on 8 rows and 8 columns".into())
}

fn side10(x: i64, want: i64) -> Outcome {
    let q = build(5, x, Some(&fixtures::base_m5())).map_err(err)?;
    let starts = diagonal_starts(5);
    let r = verify::semicircular_products(&q, 5, &starts, &starts).map_err(err)?;
    let mu = Dihedral::new(50).map_err(err)?.rotation(want);
    ensure(r.coverage.ok, || "coverage fails".into())?;
    ensure(r.is_semi_magic() && all_lines_equal(&r, mu), || format!("constant {:?}", r.magic_constant))?;
    Ok(format!("all 100 elements once; constant {mu}"))
}

fn duals() -> Outcome {
    let g = Dihedral::new(32).map_err(err)?;
    let q = build(4, 0, Some(&fixtures::base_m4())).map_err(err)?;
    let rows: Vec<_> = (0..8).map(|i| ((i + 1) % 4, 4 + (i + 1) % 4)).collect();
    let cols: Vec<_> = (0..8).map(|j| ((j + 3) % 4, 4 + (j + 3) % 4)).collect();
    let r = verify::semicircular_products(&q, 4, &rows, &cols).map_err(err)?;
    ensure(r.is_semi_magic() && all_lines_equal(&r, g.rotation(4)), || {
        format!("shift 1 gives {:?}", r.magic_constant)
    })?;
    let g = Dihedral::new(50).map_err(err)?;
    let q = build(5, 1, Some(&fixtures::base_m5())).map_err(err)?;
    let r = verify::exists_semicircular(&q, 5).map_err(err)?;
    let want = vec![g.rotation(5), g.rotation(25)];
    ensure(r.common_constants == want, || format!("m=5 x=1 constants {:?}", r.common_constants))?;
    Ok("m=4 shift 1 gives r^4; m=5 x=1 reaches r^5 and r^25".into())
}

fn properties() -> Outcome {
    for m in 3..=8 {
        for x in 0..=2 {
            let blocks = build_blocks(m, x, None).map_err(err)?;
            let q = build(m, x, None).map_err(err)?;
            ensure(verify::check_coverage(&q).ok, || format!("coverage m={m} x={x}"))?;
            if m % 2 == 0 {
                for (u, v, refl) in [(0, 0, false), (0, 1, true), (1, 0, true), (1, 1, false)] {
                    let pure = blocks.get(u, v).cells().iter().all(|c| c.is_reflection() == refl);
                    ensure(pure, || format!("block purity m={m} x={x}"))?;
                }
            }
            let mu = generate(m).map_err(err)?.translate(x).constant();
            let want = expected_constant(m, mu).map_err(err)?;
            let starts = diagonal_starts(m);
            let r = verify::semicircular_products(&q, m, &starts, &starts).map_err(err)?;
            ensure(all_lines_equal(&r, want.primary), || format!("constant m={m} x={x}"))?;
            let all = verify::exists_semicircular(&q, m).map_err(err)?;
            ensure(all.common_constants.contains(&want.dual), || format!("dual m={m} x={x}"))?;
        }
    }
    for m in 3..=12 {
        let ps = PowerSquares::build(&generate(m).map_err(err)?);
        ensure(ps.check_sums().ok, || format!("sums m={m}"))?;
    }
    Ok("m in 3..=8, x in 0..=2; sums for m in 3..=12".into())
}

fn group_laws() -> Outcome {
    for k in 1..=8 {
        let g = Dihedral::new(k).map_err(err)?;
        let els = g.enumerate_elements();
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    let l = g.multiply(g.multiply(a, b), c);
                    let r = g.multiply(a, g.multiply(b, c));
                    ensure(l == r, || format!("associativity fails in D_{k}"))?;
                }
            }
        }
    }
    for k in 1..=64 {
        let g = Dihedral::new(k).map_err(err)?;
        let s = g.reflection(0);
        for i in 0..k as i64 {
            let lhs = g.multiply(g.multiply(s, g.rotation(i)), s);
            ensure(lhs == g.rotation(-i), || format!("s r^{i} s in D_{k}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let g = Dihedral::new(rng.gen_range(1..=40)).map_err(err)?;
        let els = g.enumerate_elements();
        let len = rng.gen_range(1..=12);
        let seq: Vec<_> = (0..len).map(|_| els[rng.gen_range(0..els.len())]).collect();
        let refl = seq.iter().filter(|a| a.is_reflection()).count();
        let p = g.sequence_product(seq.iter().copied()).map_err(err)?;
        ensure(p.is_rotation() == (refl % 2 == 0), || "parity lemma fails".into())?;
    }
    Ok("associativity k<=8; s r^i s = r^-i for k<=64; parity on 10000 sequences".into())
}

fn sms2() -> Outcome {
    let out = search::sms2_nonexistence(Order4::Klein);
    ensure(out.kind == OutcomeKind::ExhaustedNonexistence, || format!("{:?}", out.kind))?;
    ensure(out.configurations_examined == 24, || format!("{} configurations", out.configurations_examined))?;
    Ok("nonexistence over D_2, 24 configurations".into())
}

fn rectangle() -> Outcome {
    let g = Dihedral::new(4).map_err(err)?;
    let grid = io::parse_text(fixtures::D4_RECT_2X4).map_err(err)?;
    let r = verify::verify_rectangle(&grid, OrderingClass::Arbitrary).map_err(err)?;
    ensure(r.coverage.ok, || "coverage fails".into())?;
    ensure(r.row_constants.contains(&g.rotation(2)), || format!("rows reach {:?}", r.row_constants))?;
    ensure(r.col_constant == Some(g.rotation(1)), || format!("columns give {:?}", r.col_constant))?;
    let out = search::rectangle_search(2, 4, 4, None, 0).map_err(err)?;
    ensure(out.kind == OutcomeKind::Found, || format!("search gave {:?}", out.kind))?;
    Ok("reference rectangle: rows r^2, columns r^1; search finds a witness".into())
}

fn spectrum() -> Outcome {
    for (m, k, want) in [(4, 32, vec![8, 24]), (5, 50, vec![5, 15, 25, 35, 45])] {
        let g = Dihedral::new(k).map_err(err)?;
        let s = search::spectrum_enumerate(m, false).map_err(err)?;
        let want: Vec<_> = want.into_iter().map(|a| g.rotation(a)).collect();
        ensure(s.constants == want, || format!("m={m}: {:?}", s.constants))?;
        ensure(s.all_verified(), || format!("m={m}: a constant was not realized"))?;
    }
    Ok("m=4 {r^8, r^24}; m=5 {r^5, r^15, r^25, r^35, r^45}".into())
}

fn round_trip() -> Outcome {
    for (name, text) in fixtures::ALL {
        let back = if text.starts_with("dihedral") {
            io::serialize_text(&io::parse_text(text).map_err(err)?)
        } else if text.starts_with("intsquare") {
            crate::IntMagicSquare::from_text(text).map_err(err)?.to_text()
        } else {
            let (kind, rows) = parse_power_text(text).map_err(err)?;
            let m = rows.len();
            let mut out = format!("powersquare m={m} modulus={} kind={kind}\n", 2 * m * m);
            crate::base::write_rows(&mut out, &rows);
            out
        };
        ensure(back == text, || format!("{name} does not round-trip"))?;
    }
    Ok(format!("{} files", fixtures::ALL.len()))
}

const CHECKS: [(&str, fn() -> Outcome); 12] = [
    ("power squares m=4", power_m4),
    ("power squares m=5", power_m5),
    ("side 8 square and constant r^8", side8),
    ("side 10 square and constant r^5", || side10(0, 5)),
    ("translated side 10 square and constant r^25", || side10(1, 25)),
    ("dual constants", duals),
    ("construction properties", properties),
    ("group laws", group_laws),
    ("no semi-magic square of side 2", sms2),
    ("2x4 rectangle over D_4", rectangle),
    ("translation spectrum", spectrum),
    ("fixture round trip", round_trip),
];

pub fn run_all() -> Vec<Check> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Check {
                id: i + 1,
                name,
                passed,
                detail,
            }
        })
        .collect()
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2}. {}: {}", self.id, self.name, self.detail)
    }
}
