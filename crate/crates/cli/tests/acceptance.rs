//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use limitcoh_core::algebra::weil_split;
use limitcoh_core::complexes::{monodromy_on_graded, weight_ss};
use limitcoh_core::degeneration::{
    builtin_example, chi_compare, clemens_schmid, limit_cohomology, self_duality, steenbrink, SemistableFiber,
};
use limitcoh_core::phimod::{dual, hom_ext_phi, tate_twist, tensor, PhiNModule};
use limitcoh_core::random::{random_module, random_pure_column_complex, random_pure_module};
use limitcoh_core::{Field, Matrix};
use limitcoh_cli::run;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXAMPLES: [&str; 6] = ["good-elliptic", "tate-2gon", "tate-3gon", "tate-4gon", "tate-5gon", "two-component-surface"];
const SEED: u64 = 0x5eed_1ec0;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn example(name: &str) -> Result<SemistableFiber, String> {
    builtin_example(name, 3).map_err(|e| format!("{name}: {e}"))
}

fn tsv_rows(out: &str) -> Vec<Vec<String>> {
    out.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split('\t').map(str::to_string).collect()).collect()
}

fn tate_monodromy() -> Verdict {
    let out = run(["limitcoh", "limit", "--example", "tate-2gon", "--tsv"]);
    ensure(out.status == 0, format!("exit {}", out.status))?;
    let rows = tsv_rows(&out.stdout);
    let row = rows.iter().find(|r| r[0] == "1").ok_or("no degree-1 row")?;
    ensure(row[1] == "2" && row[2] == "{0,2}" && row[3] == "1", format!("degree-1 row {row:?}"))?;
    ensure(row[4] == "[1, 0; 0, 3]", format!("Frobenius in weight basis {}", row[4]))?;
    let fib = example("tate-2gon")?;
    let lc = limit_cohomology(&fib, None).map_err(|e| e.to_string())?;
    let n = lc.degrees[&1].normalized_n(fib.field());
    ensure(n == Matrix::from_ints(&[&[0, 1], &[0, 0]]), format!("normalized N = {n}"))?;
    Ok("dim 2, weights {0,2}, Frobenius diag(1,p), N = [0, 1; 0, 0]".into())
}

fn tate_decomposition() -> Verdict {
    let lc = limit_cohomology(&example("tate-2gon")?, None).map_err(|e| e.to_string())?;
    let got: Vec<(usize, Vec<i64>)> =
        lc.degrees.values().map(|d| (d.dim(), d.weights.iter().flat_map(|(&w, &k)| std::iter::repeat(w).take(k)).collect())).collect();
    let want = vec![(1, vec![0]), (2, vec![0, 2]), (1, vec![2])];
    ensure(got == want, format!("{got:?}"))?;
    Ok("dims (1, 2, 1), weights (0; 0,2; 2)".into())
}

fn koszul_suite() -> Verdict {
    let out = run(["limitcoh", "selftest", "koszul", "--nmax", "4", "--tsv"]);
    let rows = tsv_rows(&out.stdout);
    let failed: Vec<&String> = rows.iter().filter(|r| r[1] != "yes").map(|r| &r[0]).collect();
    ensure(out.status == 0 && failed.is_empty() && !rows.is_empty(), format!("exit {}, failed {failed:?}", out.status))?;
    Ok(format!("{} exact identities", rows.len()))
}

fn weights(d: &PhiNModule, f: &Field) -> Result<BTreeMap<i64, usize>, String> {
    weil_split(d.phi(), f).map(|s| s.dims()).map_err(|e| e.to_string())
}

fn module_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let primes = [2, 3, 5, 7];
    for i in 0..200 {
        let f = Field::new(primes[i % 4]).unwrap();
        let d = random_module(&mut rng, &f, 5, (-4, 4));
        let e = random_module(&mut rng, &f, 3, (-4, 4));
        let ctx = |what: &str| format!("module {i}: {what}");

        ensure(d.monodromy().pow(d.dim(), &f).unwrap().is_zero(), ctx("N not nilpotent"))?;
        let he = hom_ext_phi(d.base(), e.base(), &f);
        ensure(he.hom_dim == he.ext1_dim, ctx("hom ≠ ext1"))?;

        let (a, b) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        if a != b {
            let pa = random_pure_module(&mut rng, &f, 2, a);
            let pb = random_pure_module(&mut rng, &f, 2, b);
            let o = hom_ext_phi(pa.base(), pb.base(), &f);
            ensure((o.hom_dim, o.ext1_dim) == (0, 0), ctx("distinct pure weights not orthogonal"))?;
        }

        let (wd, we) = (weights(&d, &f)?, weights(&e, &f)?);
        let mut sum = BTreeMap::new();
        for (x, m) in &wd {
            for (y, k) in &we {
                *sum.entry(x + y).or_insert(0) += m * k;
            }
        }
        ensure(weights(&tensor(&d, &e, &f), &f)? == sum, ctx("tensor weights not additive"))?;
        let neg: BTreeMap<i64, usize> = wd.iter().map(|(w, k)| (-w, *k)).collect();
        ensure(weights(&dual(&d, &f), &f)? == neg, ctx("dual weights not negated"))?;
        let n = rng.gen_range(-3..=3);
        let back = tate_twist(&tate_twist(&d, n, &f), -n, &f);
        ensure(back.phi() == d.phi() && back.monodromy() == d.monodromy(), ctx("twist roundtrip"))?;
    }
    Ok("200 random modules, six properties each".into())
}

fn ss_degeneration() -> Verdict {
    for name in EXAMPLES {
        let fib = example(name)?;
        let st = steenbrink(&fib).map_err(|e| e.to_string())?;
        let ss = weight_ss(st.total(), fib.field()).map_err(|e| e.to_string())?;
        let g = monodromy_on_graded(&st.monodromy, fib.field()).map_err(|e| e.to_string())?;
        ensure(ss.columns_pure && ss.degenerates_at_e2 && g.only_lowers_by_two, format!("{name}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    for i in 0..50 {
        let f = Field::new([2, 3, 5, 7][i % 4]).unwrap();
        let m = random_pure_column_complex(&mut rng, &f);
        let ss = weight_ss(m.complex(), &f).map_err(|e| e.to_string())?;
        let g = monodromy_on_graded(&m, &f).map_err(|e| e.to_string())?;
        ensure(ss.columns_pure && ss.degenerates_at_e2 && g.only_lowers_by_two, format!("random complex {i}"))?;
    }
    Ok(format!("{} examples and 50 random complexes: E2 = E∞, N: gr_i → gr_(i−2)", EXAMPLES.len()))
}

fn chi_cross_check() -> Verdict {
    for name in EXAMPLES {
        chi_compare(&example(name)?).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("fiber of N and spliced complexes agree on every example".into())
}

fn clemens_schmid_criterion() -> Verdict {
    for n in 2..=5 {
        let name = format!("tate-{n}gon");
        let cs = clemens_schmid(&example(&name)?).map_err(|e| format!("{name}: {e}"))?;
        ensure(cs.all_exact() && cs.wm_pass(), format!("{name}: exact {}, wm {}", cs.all_exact(), cs.wm_pass()))?;
    }
    let cs = clemens_schmid(&example("good-elliptic")?).map_err(|e| e.to_string())?;
    ensure(cs.monodromy_zero && cs.duality_isomorphisms && cs.all_exact(), "good-elliptic does not reduce to isomorphisms")?;
    Ok("n-gons 2..5 exact with weight-monodromy; good reduction gives isomorphisms".into())
}

fn self_duality_criterion() -> Verdict {
    for name in EXAMPLES {
        let sd = self_duality(&example(name)?).map_err(|e| e.to_string())?;
        ensure(sd.terms_match() && sd.homology_match(), name)?;
    }
    Ok("term and homology profiles match the twisted dual".into())
}

fn ngon_invariance() -> Verdict {
    let summary = |n: usize| -> Result<Vec<(i64, usize, BTreeMap<i64, usize>, usize)>, String> {
        let lc = limit_cohomology(&example(&format!("tate-{n}gon"))?, None).map_err(|e| e.to_string())?;
        Ok(lc.degrees.iter().map(|(&k, d)| (k, d.dim(), d.weights.clone(), d.n_rank)).collect())
    };
    let reference = summary(2)?;
    for n in 3..=5 {
        ensure(summary(n)? == reference, format!("tate-{n}gon differs"))?;
    }
    Ok("dims, weights and N-ranks agree for n = 2..5".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("Tate-curve monodromy", tate_monodromy),
        ("Tate-curve decomposition", tate_decomposition),
        ("Koszul identity suite", koszul_suite),
        ("(phi,N)-module algebra properties", module_properties),
        ("weight spectral sequence degeneration", ss_degeneration),
        ("chi cross-check", chi_cross_check),
        ("Clemens-Schmid", clemens_schmid_criterion),
        ("Steenbrink self-duality", self_duality_criterion),
        ("n-gon invariance", ngon_invariance),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag} {name}: {detail} ({:.1}s)", i + 1, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
