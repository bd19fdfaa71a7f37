//! Acceptance suite: one line per criterion, exact integer checks only.
//! Run with `cargo test -p brunnian-core --test acceptance`.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use brunnian::braid::{closure_pd, delete_strand, is_brunnian};
use brunnian::freegroup::is_trivial_braid;
use brunnian::generators::{
    family_generators, milnor_string_link, random_pure_braid, stack, LinkFamily,
};
use brunnian::milnor::{milnor_vector, mu_sigma};
use brunnian::pd::PdCode;
use brunnian::polyinv::{coeff_invariant, conway, conway_skein, ConwayPoly};
use brunnian::quadratic::{bracket_value, fit_coefficients, vanishing_check, verify_with};
use brunnian::treealg::{
    all_labeled_trees, comb_basis_tree, integer_rank, reduce_to_basis, reduce_with, sym_square,
    Strategy,
};
use brunnian::{BraidWord, Permutation, PureBraid, StringLinkPresentation, SymSquareVector, TreeVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// The n = 2 family: powers of the Borromean string link, random
/// conjugates and two vanishing-vector constructions.
const FAMILY_N2: &str = "powers:1:-3..3 conj:1:11:3 conj:1:23:4 conj:1:5:2 cancel:1:7:3 cancel:1:19:2 unlink";

fn family_n2() -> LinkFamily {
    family_generators(2, &FAMILY_N2.parse().unwrap()).unwrap()
}

/// Milnor link closures for n = 3, their stackings and a conjugate.
const FAMILY_N3: &str = "powers:12:-1..1 powers:21:1..1 mix:12^1,21^1 mix:21^1,12^1 mix:12^2 mix:12^1,21^-1 conj:21:3:2";

fn family_n3() -> LinkFamily {
    family_generators(3, &FAMILY_N3.parse().unwrap()).unwrap()
}

fn duality() -> Check {
    for n in 2..=4 {
        let perms = Permutation::all(n - 1);
        for tau in &perms {
            let beta = milnor_string_link(n, tau).map_err(|e| e.to_string())?;
            for sigma in &perms {
                let v = mu_sigma(&beta, sigma).map_err(|e| e.to_string())?;
                ensure(v == i64::from(sigma == tau), || {
                    format!("n={n}: mu_{sigma}(beta_{tau}) = {v}")
                })?;
            }
        }
    }
    Ok("identity matrices of size 1, 2, 6 for n = 2, 3, 4".into())
}

/// Deletes every strand and checks the Artin action is trivial.
fn brunnian_by_deletion(b: &PureBraid) -> bool {
    (1..=b.strands()).all(|k| is_trivial_braid(delete_strand(b, k).unwrap().word()))
}

fn brunnian_checks() -> Check {
    let mut count = 0;
    for n in 1..=4 {
        for sigma in Permutation::all(n - 1) {
            let beta = milnor_string_link(n, &sigma).map_err(|e| e.to_string())?;
            ensure(brunnian_by_deletion(beta.braid()), || format!("beta_{sigma} at n={n}"))?;
            count += 1;
        }
    }
    let n4 = family_generators(4, &"powers:123:-1..1 mix:132^1,321^-1 conj:213:2:2 cancel:312:4:2".parse().unwrap())
        .map_err(|e| e.to_string())?;
    for fam in [family_n2(), family_n3(), n4] {
        for e in &fam.entries {
            ensure(e.link.is_verified_brunnian() && brunnian_by_deletion(e.link.braid()), || {
                format!("{} at n={}", e.label, fam.n)
            })?;
            count += 1;
        }
    }
    // a non-Brunnian link is refused
    let a12 = StringLinkPresentation::new(PureBraid::new(BraidWord::parse("A(1,2)", 3).unwrap()).unwrap())
        .unwrap();
    ensure(!is_brunnian(&a12), || "A(1,2) passed".into())?;
    Ok(format!("{count} presentations, all deletions trivial"))
}

fn tree_algebra() -> Check {
    let mut notes = Vec::new();
    for n in 2..=4 {
        let k = factorial(n - 1);
        for (i, sigma) in Permutation::all(n - 1).iter().enumerate() {
            let v = reduce_to_basis(&comb_basis_tree(n, sigma).unwrap()).unwrap();
            let mut unit = vec![0; k];
            unit[i] = 1;
            ensure(v.coords() == unit.as_slice(), || format!("comb {sigma} reduces to {:?}", v.coords()))?;
        }
        let trees = all_labeled_trees(n);
        let mut rows = Vec::new();
        for t in &trees {
            let a = reduce_with(t, Strategy::Spine).map_err(|e| e.to_string())?;
            let b = reduce_with(t, Strategy::RewriteTopDown).map_err(|e| e.to_string())?;
            let c = reduce_with(t, Strategy::RewriteBottomUp).map_err(|e| e.to_string())?;
            ensure(a == b && b == c, || format!("strategies disagree on {t}"))?;
            rows.push(a.coords().to_vec());
        }
        let rank = integer_rank(&rows);
        ensure(rank == k, || format!("n={n}: rank {rank}"))?;
        // q(e_a) and q(e_a + e_b) span the half-square lattice
        let mut gens = Vec::new();
        for a in 0..k {
            for b in a..k {
                let mut x = vec![0; k];
                x[a] += 1;
                x[b] += 1;
                gens.push(sym_square(&TreeVector::from_coords(n, x).unwrap()).flat());
            }
        }
        let srank = integer_rank(&gens);
        ensure(srank == k * (k + 1) / 2 && srank == SymSquareVector::lattice_rank(n), || {
            format!("n={n}: sym rank {srank}")
        })?;
        notes.push(format!("n={n}: {} trees, rank {rank}, sym rank {srank}", trees.len()));
    }
    Ok(notes.join("; "))
}

fn quadratic_law() -> Check {
    let f = coeff_invariant(4);
    let id = Permutation::identity(1);
    let bracket = bracket_value(&f, 2, &id, &id).map_err(|e| e.to_string())?;
    ensure(bracket % 2 == 0, || format!("odd diagonal bracket {bracket}"))?;
    let c = bracket / 2;
    let q = fit_coefficients(&f, 2).map_err(|e| e.to_string())?;
    ensure(q.calibration() == c, || format!("fitted {} vs {c}", q.calibration()))?;
    let fam = family_n2();
    let report = verify_with(&q, &f, &fam).map_err(|e| e.to_string())?;
    for (row, e) in report.rows.iter().zip(&fam.entries) {
        let mu = e.milnor.coords()[0];
        let value = row.f.ok_or_else(|| format!("{}: {:?}", row.label, row.error))?;
        ensure(value - row.f_unlink == c * mu * mu && row.matched, || {
            format!("{}: f - f(U) = {} but c mu^2 = {}", row.label, value - row.f_unlink, c * mu * mu)
        })?;
        if let Some(k) = row.label.strip_prefix("powers:1:") {
            let k: i64 = k.parse().unwrap();
            ensure(mu == k && value - row.f_unlink == c * k * k, || format!("power {k}"))?;
        }
        if row.label.starts_with("cancel") {
            ensure(mu == 0 && value == row.f_unlink, || format!("{} not zero", row.label))?;
        }
    }
    ensure(report.passed(), || "report has failures".into())?;
    Ok(format!("c = {c}, bracket {bracket}, {} rows match", report.summary.pass))
}

fn vanishing() -> Check {
    let r2 = vanishing_check(2, &family_n2(), &[2]).map_err(|e| e.to_string())?;
    ensure(r2.passed(), || format!("a2: {:?}", r2.rows.iter().find(|r| !r.matched)))?;
    let r3 = vanishing_check(3, &family_n3(), &[3, 5]).map_err(|e| e.to_string())?;
    ensure(r3.passed(), || format!("a3/a5: {:?}", r3.rows.iter().find(|r| !r.matched)))?;
    Ok(format!("{} rows at n=2, {} rows at n=3", r2.rows.len(), r3.rows.len()))
}

fn homotopy_invariance() -> Check {
    let fam = family_n2();
    let mut groups: BTreeMap<Vec<i64>, Vec<(String, i64)>> = BTreeMap::new();
    for e in &fam.entries {
        let a4 = coeff_invariant(4).evaluate_braid(e.link.braid().word()).map_err(|e| e.to_string())?;
        groups.entry(e.milnor.coords().to_vec()).or_default().push((e.label.clone(), a4));
    }
    let mut pairs = 0;
    for (mu, g) in &groups {
        for (label, v) in g {
            ensure(*v == g[0].1, || format!("mu {mu:?}: {label} = {v}, {} = {}", g[0].0, g[0].1))?;
        }
        pairs += g.len() - 1;
    }
    ensure(pairs >= 4, || format!("only {pairs} pairs"))?;
    Ok(format!("{pairs} pairs with equal Milnor vectors agree on a4"))
}

fn engines_agree() -> Check {
    let calib = |p: &PdCode, want: &[i64]| -> std::result::Result<(), String> {
        let got = conway_skein(p, 16).map_err(|e| e.to_string())?;
        ensure(got == ConwayPoly::from_i64(want), || format!("{} gives {got}", p.to_json()))
    };
    calib(&PdCode::unlink(1), &[1])?;
    calib(&PdCode::unlink(2), &[])?;
    let braids = [("s1 s1", 2, vec![0, 1]), ("s1 s1 s1", 2, vec![1, 0, 1]), ("", 1, vec![1]), ("", 2, vec![])];
    for (text, m, want) in &braids {
        let b = BraidWord::parse(text, *m).unwrap();
        calib(&closure_pd(&b), want)?;
        let det = conway(&b).map_err(|e| e.to_string())?;
        ensure(det == ConwayPoly::from_i64(want), || format!("determinant `{text}` gives {det}"))?;
    }
    let mut words: Vec<BraidWord> = Vec::new();
    for fam in [family_n2(), family_n3()] {
        words.extend(fam.entries.iter().map(|e| e.link.braid().word().clone()));
    }
    for n in 1..=3 {
        for s in Permutation::all(n - 1) {
            let b = milnor_string_link(n, &s).unwrap();
            words.push(b.braid().word().clone());
            words.push(stack(&b, &b.inverse()).unwrap().braid().word().clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..150 {
        let m = rng.gen_range(2..=4);
        let len = rng.gen_range(1..=16);
        let letters = (0..len).map(|_| (rng.gen_range(1..m), rng.gen_bool(0.5))).collect();
        words.push(BraidWord::new(m, letters).unwrap());
    }
    let mut compared = 0;
    for b in words.iter().filter(|b| b.len() <= 16) {
        let det = conway(b).map_err(|e| e.to_string())?;
        let skein = conway_skein(&closure_pd(b), 16).map_err(|e| e.to_string())?;
        ensure(det == skein, || format!("`{b}`: determinant {det}, skein {skein}"))?;
        ensure(det.satisfies_support(closure_pd(b).components), || format!("support of {det}"))?;
        compared += 1;
    }
    Ok(format!("calibration set and {compared} diagrams agree"))
}

/// A random Brunnian string link: a conjugated product of powers of `β_σ`.
fn random_brunnian(n: usize, rng: &mut ChaCha8Rng) -> StringLinkPresentation {
    let perms = Permutation::all(n - 1);
    let mut b = PureBraid::identity(n + 1);
    for _ in 0..rng.gen_range(1..=2) {
        let s = &perms[rng.gen_range(0..perms.len())];
        let k = rng.gen_range(-2..=2);
        b = b.concat(&milnor_string_link(n, s).unwrap().braid().pow(k)).unwrap();
    }
    let g = random_pure_braid(n + 1, rng.gen(), rng.gen_range(0..=2)).unwrap();
    StringLinkPresentation::checked(b.conjugate_by(&g).unwrap()).unwrap()
}

fn additivity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..200 {
        let n = if case % 2 == 0 { 2 } else { 3 };
        let a = random_brunnian(n, &mut rng);
        let b = random_brunnian(n, &mut rng);
        let g = random_pure_braid(n + 1, rng.gen(), rng.gen_range(1..=4)).unwrap();
        let ab = StringLinkPresentation::checked(a.braid().concat(b.braid()).unwrap()).unwrap();
        let ga = StringLinkPresentation::checked(a.braid().conjugate_by(&g).unwrap()).unwrap();
        let (va, vb) = (milnor_vector(&a).unwrap(), milnor_vector(&b).unwrap());
        let vab = milnor_vector(&ab).map_err(|e| format!("case {case}: {e}"))?;
        let vga = milnor_vector(&ga).map_err(|e| format!("case {case}: {e}"))?;
        ensure(vab == va.add(&vb), || format!("case {case}: additivity {:?}", vab.coords()))?;
        ensure(vga == va, || format!("case {case}: conjugation {:?}", vga.coords()))?;
    }
    Ok("200 cases at n = 2, 3".into())
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("milnor duality", duality),
        ("brunnian checks", brunnian_checks),
        ("tree algebra", tree_algebra),
        ("quadratic law at n=2", quadratic_law),
        ("vanishing below degree 2n", vanishing),
        ("link-homotopy invariance", homotopy_invariance),
        ("conway engines agree", engines_agree),
        ("milnor additivity and conjugation", additivity),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS {name} ({msg}) [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({msg}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
