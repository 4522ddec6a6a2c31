//! The worked examples as a regression suite, including two negative
//! controls that must be *detected*: a sign fault in the `y` maps and a
//! truncation order too low for the `(5,10)` example.

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::module::{build_m, build_rank1, solve_constraint, CoefficientTuple, Rank2Module};
use crate::oracle::{commutes, hom_basis, is_indecomposable, iso_oracle};
use crate::rim::{
    interlacing_number, is_almost_tightly_3_interlacing, profile_geometry, reduce_profile, Profile,
    Rim,
};
use crate::series::{ratio, TruncatedSeries};
use crate::structure::{
    box_sums, build_iso, build_m_beta, classify, count_indecomposables, general_r_family,
    iso_key, IsoKey, IsoOutcome, Verdict,
};
use crate::sweep::{key_counts, lattice_modules, oracle_classes, tabulate};

pub const TIGHT_THREE: &str = "1,3,5|2,4,6";
pub const TIGHT_FOUR: &str = "1,3,5,7|2,4,6,8";
pub const ALMOST_TIGHT: &str = "2,4,7,8|1,3,5,6";
pub const THREE_BOX: &str = "1,2,5,6,8|3,4,7,9,10";
/// Four boxes with one junction, on `(6,12)`.
pub const GENERAL_R: &str = "2,4,6,9,11,12|1,3,5,7,8,10";

pub const EXAMPLE_B: [i64; 6] = [-2, 0, 0, 1, -1, 2];
pub const EXAMPLE_C: [i64; 6] = [0, 1, -1, 2, -2, 0];
pub const CASE_ONE_B: [i64; 8] = [0, 1, 2, 0, 0, -3, -1, 1];
pub const THREE_BOX_M1: [&str; 10] = ["0", "t", "0", "0", "0", "1", "-t", "-1", "0", "0"];
pub const THREE_BOX_M2: [&str; 10] = ["0", "1", "0", "0", "0", "1", "0", "-2", "0", "0"];
/// Indecomposable on the three-box profile with sums `(t, -2t, t)`,
/// isomorphic to neither `M1` nor `M2`.
pub const THREE_BOX_M3: [i64; 10] = [0, -1, 1, 1, 1, -1, 1, 0, 0, -2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// The computation ran but produced something else.
    Mismatch(String),
    /// The computation stopped with an error.
    Error(Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Mismatch(d) => f.write_str(d),
            Failure::Error(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub outcome: std::result::Result<(), Failure>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

type Outcome = std::result::Result<(), Failure>;

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Outcome {
    if got == want {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{what}: expected {want:?}, got {got:?}")))
    }
}

pub fn module(profile: &str, n: usize, b: &[&str], order: usize) -> Result<Rank2Module> {
    let p = Profile::parse(profile, n)?;
    build_m(&p, &CoefficientTuple::parse(b, order)?)
}

pub fn int_module(profile: &str, n: usize, b: &[i64], order: usize) -> Result<Rank2Module> {
    let p = Profile::parse(profile, n)?;
    build_m(&p, &CoefficientTuple::from_ints(b, order))
}

fn summands(m: &Rank2Module) -> Result<Option<(String, String)>> {
    Ok(classify(m)?.summands().map(|(a, b)| (a.to_string(), b.to_string())))
}

fn pair(a: &str, b: &str) -> Option<(String, String)> {
    Some((a.to_string(), b.to_string()))
}

fn rims(text: &str, n: usize) -> Result<(Rim, Rim)> {
    let p = Profile::parse(text, n)?;
    Ok((p.i, p.j))
}

/// Runs every check. `order` replaces the default `4n` for all modules built
/// from the examples; the negative controls keep their own orders.
pub fn run(order: Option<usize>) -> Vec<Check> {
    let n_of = |n: usize| order.unwrap_or(4 * n);
    let mut out = Vec::new();
    let mut add = |name: &'static str, f: &dyn Fn() -> Outcome| {
        out.push(Check { name, outcome: f() });
    };

    add("series: b1 = -2 is a unit, t does not divide b1 + b2", &|| {
        let s = TruncatedSeries::parse("-2", n_of(6))?;
        expect("unit", s.is_unit(), true)?;
        expect("t | -2", s.divides(1)?, false)
    });
    add("interlacing numbers of 135|246 and 1357|2468", &|| {
        let (i, j) = rims(TIGHT_THREE, 6)?;
        expect("135|246", interlacing_number(&i, &j)?, 3)?;
        let (i, j) = rims(TIGHT_FOUR, 8)?;
        expect("1357|2468", interlacing_number(&i, &j)?, 4)
    });
    add("peaks and valleys of 145 on n = 8", &|| {
        let (p, v) = Rim::parse("1,4,5", 8)?.peaks_valleys();
        expect("peaks", p.into_iter().collect::<Vec<_>>(), vec![3, 8])?;
        expect("valleys", v.into_iter().collect::<Vec<_>>(), vec![1, 5])
    });
    add("three-box profile needs no reduction", &|| {
        let (i, j) = rims(THREE_BOX, 10)?;
        expect("n'", reduce_profile(&i, &j)?.i.n(), 10)
    });
    add("box geometry of 12568|347910 and 1357|2468", &|| {
        let (i, j) = rims(THREE_BOX, 10)?;
        let g = profile_geometry(&i, &j)?;
        expect("r1", g.r1, 3)?;
        let mut sizes = g.box_sizes.clone();
        sizes.sort_unstable();
        expect("sizes", sizes, vec![1, 2, 2])?;
        let (i, j) = rims(TIGHT_FOUR, 8)?;
        let g = profile_geometry(&i, &j)?;
        expect("r1", g.r1, 4)?;
        expect("sizes", g.box_sizes, vec![1; 4])?;
        expect("junctions", g.junctions.len(), 0)
    });
    add("almost tightly 3-interlacing profiles", &|| {
        let (i, j) = rims(ALMOST_TIGHT, 8)?;
        expect("2478|1356", is_almost_tightly_3_interlacing(&i, &j), true)?;
        let (i, j) = rims(TIGHT_THREE, 6)?;
        expect("135|246", is_almost_tightly_3_interlacing(&i, &j), true)?;
        let (i, j) = rims(THREE_BOX, 10)?;
        expect("12568|347910", is_almost_tightly_3_interlacing(&i, &j), false)
    });
    add("rank 1 module L_145", &|| {
        let l = build_rank1(&Rim::parse("1,4,5", 8)?, n_of(8));
        let x: Vec<String> = l.x_scalars().iter().map(TruncatedSeries::to_literal).collect();
        let y: Vec<String> = l.y_scalars().iter().map(TruncatedSeries::to_literal).collect();
        expect("x", x.join(","), "1,t,t,1,1,t,t,t".to_string())?;
        expect("y", y.join(","), "t,1,1,t,t,1,1,1".to_string())
    });
    add("example module on 135|246", &|| {
        let m = int_module(TIGHT_THREE, 6, &EXAMPLE_B, n_of(6))?;
        expect("x_1", m.x(1).to_string(), "[[t, -2], [0, 1]]".to_string())?;
        expect("relations", m.representation().verify_relations()?, true)?;
        int_module(TIGHT_FOUR, 8, &CASE_ONE_B, n_of(8)).map(|_| ()).map_err(Into::into)
    });
    add("cycle constraint forces b6 = 2 and b7 = -t", &|| {
        let p = Profile::parse(TIGHT_THREE, 6)?;
        let mut b = CoefficientTuple::from_ints(&EXAMPLE_B, n_of(6));
        b.set(6, TruncatedSeries::zero(n_of(6)));
        expect("b6", solve_constraint(&p, &b, 6)?.get(6).to_literal(), "2".to_string())?;
        let p = Profile::parse(THREE_BOX, 10)?;
        let mut b = CoefficientTuple::parse(&THREE_BOX_M1, n_of(10))?;
        b.set(7, TruncatedSeries::zero(n_of(10)));
        expect("b7", solve_constraint(&p, &b, 7)?.get(7).to_literal(), "-t".to_string())
    });
    add("rank is additive on direct sums", &|| {
        let a = build_rank1(&Rim::parse("1,3,5", 6)?, n_of(6)).representation();
        let b = build_rank1(&Rim::parse("2,4,6", 6)?, n_of(6)).representation();
        expect("rank", a.direct_sum(&b)?.rank(), 2)
    });
    add("Hom(L_135, L_246) is free of rank 1", &|| {
        let a = build_rank1(&Rim::parse("1,3,5", 6)?, n_of(6)).representation();
        let b = build_rank1(&Rim::parse("2,4,6", 6)?, n_of(6)).representation();
        expect("rank", hom_basis(&a, &b)?.free_rank(), 1)
    });
    add("135|246 example is indecomposable (criterion and oracle)", &|| {
        let m = int_module(TIGHT_THREE, 6, &EXAMPLE_B, n_of(6))?;
        expect("verdict", classify(&m)?.verdict, Verdict::Indecomposable)?;
        expect("oracle", is_indecomposable(m.representation())?, true)
    });
    add("t | b5 + b6 splits as L_125 + L_346", &|| {
        let m = int_module(TIGHT_THREE, 6, &[2, 0, -1, -1, 3, -3], n_of(6))?;
        expect("summands", summands(&m)?, pair("1,2,5", "3,4,6"))
    });
    add("three-box M1, M2: s-vectors (0,0,1) and (0,0,0)", &|| {
        let m1 = module(THREE_BOX, 10, &THREE_BOX_M1, n_of(10))?;
        let m2 = module(THREE_BOX, 10, &THREE_BOX_M2, n_of(10))?;
        expect("s(M1)", box_sums(&m1)?.valuations(), Some(vec![0, 0, 1]))?;
        expect("s(M2)", box_sums(&m2)?.valuations(), Some(vec![0, 0, 0]))?;
        expect("M1", classify(&m1)?.verdict, Verdict::Indecomposable)?;
        expect("M2", classify(&m2)?.verdict, Verdict::Indecomposable)
    });
    add("three-box M1, M2 are not isomorphic (criterion and oracle)", &|| {
        let m1 = module(THREE_BOX, 10, &THREE_BOX_M1, n_of(10))?;
        let m2 = module(THREE_BOX, 10, &THREE_BOX_M2, n_of(10))?;
        expect("build_iso", build_iso(&m1, &m2)?, IsoOutcome::NonIsomorphic)?;
        expect("oracle", iso_oracle(m1.representation(), m2.representation())?, false)
    });
    add("explicit isomorphism phi_0, phi_2, phi_4 on 135|246", &|| {
        let m1 = int_module(TIGHT_THREE, 6, &EXAMPLE_B, n_of(6))?;
        let m2 = int_module(TIGHT_THREE, 6, &EXAMPLE_C, n_of(6))?;
        let IsoOutcome::Isomorphic { family, .. } = build_iso(&m1, &m2)? else {
            return Err(Failure::Mismatch("no isomorphism".into()));
        };
        let want = [
            (0, ["1", "0", "-3/2t", "1"]),
            (2, ["-1/2", "0", "-3/2t", "-2"]),
            (4, ["-2", "0", "-3/2t", "-1/2"]),
        ];
        for (v, entries) in want {
            let [a, b, c, d] = entries.map(|e| TruncatedSeries::parse(e, n_of(6)));
            let w = SeriesMatrix::two_by_two(a?, b?, c?, d?);
            if !family[v].agrees_with(&w) {
                return Err(Failure::Mismatch(format!("phi_{v}: expected {w}, got {}", family[v])));
            }
        }
        expect("commutes", commutes(m1.representation(), m2.representation(), &family), true)
    });
    add("count of indecomposables for box sizes (1,1,l) and (1,2,2)", &|| {
        for l in 1..6 {
            expect("(1,1,l)", count_indecomposables([1, 1, l]), 1)?;
        }
        expect("(1,2,2)", count_indecomposables([1, 2, 2]), 2)
    });
    add("tight-4 case 1: M_{7,8}", &|| {
        let m = int_module(TIGHT_FOUR, 8, &CASE_ONE_B, n_of(8))?;
        let r = classify(&m)?;
        expect("verdict", r.verdict, Verdict::Indecomposable)?;
        expect("key", r.iso_key.to_string(), "M_{7,8}".to_string())?;
        expect("oracle", is_indecomposable(m.representation())?, true)
    });
    add("tight-4 case 2 summands", &|| {
        let cases: [([i64; 8], (&str, &str)); 6] = [
            ([0, 0, 0, 0, 1, 0, -1, 0], ("1,3,5,6", "2,4,7,8")),
            ([1, 0, 0, 0, 0, 0, -1, 0], ("1,2,4,6", "3,5,7,8")),
            ([1, 0, -1, 0, 0, 0, 0, 0], ("1,2,5,7", "3,4,6,8")),
            ([0, 0, 1, 0, -1, 0, 0, 0], ("1,3,4,7", "2,5,6,8")),
            ([0, 0, 1, 0, 0, 0, -1, 0], ("1,3,4,6", "2,5,7,8")),
            ([1, 0, 0, 0, -1, 0, 0, 0], ("1,2,4,7", "3,5,6,8")),
        ];
        for (b, (x, y)) in cases {
            let m = int_module(TIGHT_FOUR, 8, &b, n_of(8))?;
            expect(&format!("{b:?}"), summands(&m)?, pair(x, y))?;
        }
        Ok(())
    });
    add("beta family: M_2 = M_-2, M_2 != M_3", &|| {
        let m2 = build_m_beta(&ratio(2, 1), n_of(8))?;
        let m_2 = build_m_beta(&ratio(-2, 1), n_of(8))?;
        let m3 = build_m_beta(&ratio(3, 1), n_of(8))?;
        expect("verdict", classify(&m2)?.verdict, Verdict::Indecomposable)?;
        expect("key", iso_key(&m2)?, IsoKey::BetaSquared(ratio(4, 1)))?;
        expect("key", iso_key(&m_2)?, IsoKey::BetaSquared(ratio(4, 1)))?;
        expect("key", iso_key(&m3)?, IsoKey::BetaSquared(ratio(9, 1)))?;
        expect("oracle 2 ~ -2", iso_oracle(m2.representation(), m_2.representation())?, true)?;
        expect("oracle 2 ~ 3", iso_oracle(m2.representation(), m3.representation())?, false)
    });
    add("general-r family on (6,12): four non-isomorphic indecomposables", &|| {
        let p = Profile::parse(GENERAL_R, 12)?;
        let ms = (1..=4)
            .map(|s| general_r_family(&p, s, n_of(12)))
            .collect::<Result<Vec<_>>>()?;
        expect("classes", oracle_classes(&ms)?.len(), 4)
    });
    add("general-r family on 1357|2468, start 4, is M_{7,8}", &|| {
        let p = Profile::parse(TIGHT_FOUR, 8)?;
        let m = general_r_family(&p, 4, n_of(8))?;
        expect("key", iso_key(&m)?.to_string(), "M_{7,8}".to_string())
    });
    add("135|246 sweep: one indecomposable class", &|| {
        let p = Profile::parse(TIGHT_THREE, 6)?;
        sweep_classes(&p, n_of(6), 1)
    });
    add("2478|1356 sweep: one indecomposable class", &|| {
        let p = Profile::parse(ALMOST_TIGHT, 8)?;
        sweep_classes(&p, n_of(8), 1)
    });
    add("three-box classes match the count formula", &|| {
        let ms = vec![
            module(THREE_BOX, 10, &THREE_BOX_M1, n_of(10))?,
            module(THREE_BOX, 10, &THREE_BOX_M2, n_of(10))?,
            int_module(THREE_BOX, 10, &THREE_BOX_M3, n_of(10))?,
        ];
        let classes = oracle_classes(&ms)?.len();
        if classes > count_indecomposables([1, 2, 2]) {
            return Err(Failure::Mismatch(format!(
                "count formula gives {}, but M1, M2 and {THREE_BOX_M3:?} are pairwise \
                 non-isomorphic indecomposables ({classes} classes)",
                count_indecomposables([1, 2, 2])
            )));
        }
        Ok(())
    });
    add("negative control: y sign fault breaks the relations", &|| {
        let m = int_module(TIGHT_THREE, 6, &EXAMPLE_B, 24)?;
        let failures = m.representation().with_y_sign_fault().relation_failures()?;
        expect("detected", failures.is_empty(), false)
    });
    add("negative control: N = 6 on (5,10) reports precision exhaustion", &|| {
        let m1 = module(THREE_BOX, 10, &THREE_BOX_M1, 6)?;
        let m2 = module(THREE_BOX, 10, &THREE_BOX_M2, 6)?;
        let mut exhausted = 0;
        // every step either answers correctly or stops
        let mut step = |r: Result<bool>, want: bool, what: &str| match r {
            Ok(got) if got == want => Ok(()),
            Ok(got) => Err(Failure::Mismatch(format!("{what}: wrong answer {got} at N = 6"))),
            Err(Error::PrecisionExhausted { .. }) => {
                exhausted += 1;
                Ok(())
            }
            Err(e) => Err(Failure::Error(e)),
        };
        step(classify(&m1).map(|r| r.verdict == Verdict::Indecomposable), true, "classify M1")?;
        step(classify(&m2).map(|r| r.verdict == Verdict::Indecomposable), true, "classify M2")?;
        step(build_iso(&m1, &m2).map(|o| o == IsoOutcome::NonIsomorphic), true, "build_iso")?;
        step(is_indecomposable(m1.representation()), true, "oracle M1")?;
        step(iso_oracle(m1.representation(), m2.representation()), false, "oracle iso")?;
        expect("steps reporting PrecisionExhausted", exhausted > 0, true)
    });
    out
}

/// Theorem keys over a `{-1,0,1}` lattice, then the oracle on one
/// representative per key.
fn sweep_classes(p: &Profile, order: usize, want: usize) -> Outcome {
    let ms = lattice_modules(p, (-1, 1), 250, order)?;
    let rows = tabulate(&ms, false)?;
    let keys = key_counts(&rows, &Verdict::Indecomposable);
    expect("keys", keys.len(), want)?;
    let mut reps = Vec::new();
    for (m, row) in ms.iter().zip(&rows) {
        if row.verdict == "Indecomposable" && reps.len() < 6 {
            reps.push(m.clone());
        }
    }
    expect("oracle classes", oracle_classes(&reps)?.len(), want)
}
