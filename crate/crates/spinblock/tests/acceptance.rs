//! Acceptance suite: one line per criterion, each with its own time limit.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use spinblock::bar_partitions::{
    b_counts, bar_core, bar_quotient, content, multi_content, p_strict_partitions, rouquier_core,
    strict_block_partitions, strict_partitions, Multipartition, Partition,
};
use spinblock::dims::{
    chi_poly, core_block_dim, dim_y1, dim_yd_closed, dim_yd_sum, graded_dim, gg_truncated_dim, level_factor, m_ij,
    seq_count, seq_count_formula, slide_family_degree_sum, strict_kostka, strict_square_sum, ungraded_dim,
    weight_one_double_sum, zigzag_block_dim,
};
use spinblock::fock::{apply_f, fv_form, serre_holds, FockVector, FormMode};
use spinblock::root_datum::{
    coroot_marks, coroot_pairing, explicit_cuspidal_words, fundamental_pairing, simple_norm, word_content,
    words_of_content, ConeChecker, RootVector, Word,
};
use spinblock::spin_blocks::{
    block_dims_from_partitions, labels_with_cores, levelone_jm_check, sergeev_iso_check, superblocks_in,
    TwistedGroup,
};
use spinblock::super_algebra::{
    build_a, build_b, check_zigzag_iso, clifford, determinant, gram_matrix, hd_quotient_wreath_dim, is_associative,
    Hd, HdElement, SuperAlgebra, Wreath,
};
use spinblock::tableaux::{enumerate_std, node_sets};
use spinblock::LaurentPoly;

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lp(t: &[(i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(t.iter().copied())
}

fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn all_words(n: usize, ell: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=ell).map(move |i| {
                    let mut v = v.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

fn random_word(rng: &mut StdRng, len: usize, ell: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..=ell)).collect()
}

fn rho_level(rho: &Partition, level: usize) -> Multipartition {
    Multipartition::new(vec![rho.clone(); level])
}

fn core_quotient() -> Result<(), String> {
    let lam = part(&[16, 11, 10, 10, 9, 4, 1]);
    let core = bar_core(&lam, 5).map_err(err)?;
    ensure!(core == part(&[1]), "core {core:?}");
    let quot = bar_quotient(&lam, 5).map_err(err)?;
    let expect = Multipartition::new(vec![part(&[2, 2]), part(&[3, 3, 2]), Partition::empty()]);
    ensure!(quot == expect, "quotient {quot:?}");
    Ok(())
}

fn graded_dims() -> Result<(), String> {
    let one_q2_q4 = lp(&[(0, 1), (2, 1), (4, 1)]);
    let g = graded_dim(1, &RootVector::from_coeffs(&[2, 1]), &w("010"), &w("010"), 3).map_err(err)?.dim;
    ensure!(g == one_q2_q4, "theta=2a0+a1 gave {g}");

    let qq = lp(&[(1, 1), (-1, 1)]);
    let expect = &one_q2_q4 * &(&qq * &qq);
    let g = graded_dim(1, &RootVector::from_coeffs(&[3, 1]), &w("0100"), &w("0100"), 3).map_err(err)?.dim;
    ensure!(g == expect, "theta=3a0+a1 gave {g}");

    let th = RootVector::from_coeffs(&[4, 2]);
    let s = lp(&[(0, 1), (2, 1)]);
    let a = &lp(&[(5, 1), (3, 1), (1, 1)]) * &s;
    let b = &lp(&[(1, 1), (-1, 1), (-3, 1)]) * &s;
    let expect_j = &(&a * &a) + &(&b * &b);
    let g = graded_dim(1, &th, &w("010001"), &w("010001"), 3).map_err(err)?.dim;
    ensure!(g == expect_j, "e(010001) diagonal gave {g}");

    let sq = |x: &LaurentPoly| x * x;
    let t1 = &s * &sq(&(&lp(&[(2, 1)]) * &s));
    let t2 = sq(&(&lp(&[(1, 1)]) * &s));
    let t3 = sq(&(&lp(&[(3, 1), (1, 1)]) * &s));
    let t4 = &(&s * &lp(&[(0, 1), (4, -1)])) * &sq(&s);
    let t5 = &s * &sq(&qq);
    let expect_i = &(&(&(&t1 + &t2) + &t3) + &t4) + &t5;
    let g = graded_dim(1, &th, &w("010010"), &w("010010"), 3).map_err(err)?.dim;
    ensure!(g == expect_i, "e(010010) diagonal gave {g}");
    Ok(())
}

fn specialization() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for p in [3, 5] {
        let ell = (p - 1) / 2;
        for level in 1..=2 {
            for _ in 0..50 {
                let len = rng.gen_range(1..=6);
                let a = random_word(&mut rng, len, ell);
                let th = word_content(&Word::new(a), ell).map_err(err)?;
                let class = words_of_content(&th);
                let wi = Word::new(class[rng.gen_range(0..class.len())].clone());
                let wj = Word::new(class[rng.gen_range(0..class.len())].clone());
                let g = graded_dim(level, &th, &wi, &wj, p).map_err(err)?.dim;
                let u = ungraded_dim(level, &th, &wi, &wj, p).map_err(err)?;
                ensure!(g.eval_one() as u128 == u, "p={p} N={level} {wi:?} {wj:?}: {g} vs {u}");
            }
        }
    }
    Ok(())
}

fn fock_cross_check() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    for p in [3, 5] {
        let ell = (p - 1) / 2;
        for level in 1..=2 {
            let compare = |a: &[usize], b: &[usize]| -> Result<(), String> {
                let (wa, wb) = (Word::new(a.to_vec()), Word::new(b.to_vec()));
                let d = fv_form(&wa, &wb, level, p, FormMode::Direct).map_err(err)?;
                let t = fv_form(&wa, &wb, level, p, FormMode::TableauSum).map_err(err)?;
                ensure!(d == t, "p={p} N={level} {a:?} {b:?}: {d} vs {t}");
                Ok(())
            };
            for n in 0..=5 {
                let mut classes: BTreeMap<Vec<i64>, Vec<Vec<usize>>> = BTreeMap::new();
                for a in all_words(n, ell) {
                    let th = word_content(&Word::new(a.clone()), ell).map_err(err)?;
                    classes.entry(th.doubled().to_vec()).or_default().push(a);
                }
                for class in classes.values() {
                    for a in class {
                        for b in class {
                            compare(a, b)?;
                        }
                    }
                }
                // different contents pair to zero on both sides
                let firsts: Vec<&Vec<usize>> = classes.values().map(|c| &c[0]).collect();
                for pair in firsts.windows(2) {
                    compare(pair[0], pair[1])?;
                }
            }
            for _ in 0..50 {
                let a = random_word(&mut rng, 6, ell);
                let th = word_content(&Word::new(a.clone()), ell).map_err(err)?;
                let class = words_of_content(&th);
                let b = class[rng.gen_range(0..class.len())].clone();
                compare(&a, &b)?;
            }
        }
    }
    Ok(())
}

fn fock_example() -> Result<(), String> {
    let u = FockVector::basis(5, Multipartition::single(part(&[5, 5, 2])));
    let got = apply_f(0, &u).map_err(err)?;
    let mut expect = FockVector::basis(5, Multipartition::single(part(&[6, 5, 2]))).scale(&lp(&[(0, 1), (4, -1)]));
    expect = expect.add(&FockVector::basis(5, Multipartition::single(part(&[5, 5, 2, 1]))));
    ensure!(got == expect, "got {:?}", got.to_json());
    Ok(())
}

fn serre() -> Result<(), String> {
    for p in [3, 5] {
        let ell = (p - 1) / 2;
        for level in 1..=2 {
            for n in 0..=8 {
                for m in spinblock::bar_partitions::p_strict_multipartitions(n, level, p) {
                    for i in 0..=ell {
                        for j in 0..=ell {
                            ensure!(serre_holds(i, j, &m, p).map_err(err)?, "p={p} {m:?} i={i} j={j}");
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn cuspidal() -> Result<(), String> {
    for ell in 1..=3 {
        let mut cc = ConeChecker::new(ell);
        let mut found = BTreeSet::new();
        for v in words_of_content(&RootVector::delta(ell)) {
            if cc.is_cuspidal(&Word::new(v.clone())).map_err(err)? {
                found.insert(v);
            }
        }
        let expect: BTreeSet<Vec<usize>> = explicit_cuspidal_words(ell).into_iter().collect();
        ensure!(found == expect, "ell={ell}: {} cone words vs {} shuffles", found.len(), expect.len());
    }
    Ok(())
}

fn yd_dimensions() -> Result<(), String> {
    for p in [3usize, 5, 7] {
        let ell = (p - 1) / 2;
        let a = build_a(ell).map_err(err)?;
        for d in 0..=4 {
            let closed = dim_yd_closed(p, d).map_err(err)?;
            let formula = factorial(d) * (2 * p as u128 - 3).pow(d as u32);
            ensure!(closed == formula, "p={p} d={d} closed {closed} vs {formula}");
            let sum = dim_yd_sum(&rouquier_core(p, d).map_err(err)?, p, d).map_err(err)?;
            ensure!(sum == formula, "p={p} d={d} sum {sum}");
            let wreath = Wreath::new(&a, d).dim() as u128;
            ensure!(wreath == formula, "p={p} d={d} wreath {wreath}");
            if d >= 1 && ell <= 2 && d <= 3 {
                let hd = hd_quotient_wreath_dim(ell, d).map_err(err)?;
                ensure!(hd == formula, "p={p} d={d} H_d quotient {hd}");
            }
        }
    }
    Ok(())
}

fn strict_kostka_identity() -> Result<(), String> {
    for n in 0..=10 {
        let mut total = 0u128;
        for lam in strict_partitions(n) {
            let k = strict_kostka(&lam).map_err(err)?;
            total += (1u128 << (n - lam.height())) * k * k;
        }
        ensure!(total == factorial(n), "n={n}: {total}");
        ensure!(strict_square_sum(n).map_err(err)? == factorial(n), "n={n} library sum");
    }
    Ok(())
}

fn slide_sequences() -> Result<(), String> {
    let p = 5;
    let ell = 2;
    for rho in [Partition::empty(), rouquier_core(5, 3).map_err(err)?] {
        for d in 1..=3 {
            for lam in strict_block_partitions(&rho, p, d).map_err(err)? {
                let n = seq_count(&rho, &lam, p, None).map_err(err)?;
                let f = seq_count_formula(&lam, p, false).map_err(err)?;
                ensure!(n == f, "rho={rho:?} {lam:?}: {n} vs {f}");
                let sizes: Vec<usize> = bar_quotient(&lam, p).map_err(err)?.components.iter().map(Partition::size).collect();
                for colors in all_words(d, ell) {
                    let c = seq_count(&rho, &lam, p, Some(&Word::new(colors.clone()))).map_err(err)?;
                    let mut eta = vec![0; ell + 1];
                    colors.iter().for_each(|&i| eta[i] += 1);
                    let expect = if eta == sizes { seq_count_formula(&lam, p, true).map_err(err)? } else { 0 };
                    ensure!(c == expect, "rho={rho:?} {lam:?} colors {colors:?}: {c} vs {expect}");
                }
            }
        }
    }
    Ok(())
}

fn weight_one() -> Result<(), String> {
    for p in [3, 5] {
        let ell = (p - 1) / 2;
        let rho = rouquier_core(p, 1).map_err(err)?;
        for u in enumerate_std(&Multipartition::single(rho.clone()), p, None) {
            for i in 0..ell {
                for k in 0..=ell {
                    let s = slide_family_degree_sum(&rho, &u, i, k, p).map_err(err)?;
                    ensure!(s == chi_poly(i, k, ell), "p={p} i={i} k={k}: {s}");
                }
            }
        }
        for level in 1..=2 {
            let tabs = enumerate_std(&rho_level(&rho, level), p, None);
            let q = core_block_dim(&rho, level, p).map_err(err)?;
            for (u, v) in [(&tabs[0], tabs.last().unwrap()), (tabs.last().unwrap(), &tabs[0])] {
                for i in 0..ell {
                    for j in 0..ell {
                        let lhs = weight_one_double_sum(&rho, p, u, v, i, j).map_err(err)?;
                        let rhs = &(&m_ij(ell, i, j) * &zigzag_block_dim(i, j)) * &level_factor(level);
                        ensure!(lhs == rhs, "p={p} N={level} i={i} j={j}: {lhs} vs {rhs}");
                    }
                }
            }
            for i in 0..ell {
                for j in 0..ell {
                    let g = gg_truncated_dim(&rho, p, level, i, j).map_err(err)?;
                    ensure!(g == &q * &dim_y1(level, i, j), "p={p} N={level} i={i} j={j}: {g}");
                }
            }
        }
    }
    Ok(())
}

fn superblock_labels() -> Result<(), String> {
    for n in 1..=6 {
        let g = TwistedGroup::new(n);
        for p in [3, 5] {
            let blocks = superblocks_in(&g, p).map_err(err)?;
            let total: u128 = blocks.iter().map(|b| b.dimension).sum();
            ensure!(total == factorial(n), "n={n} p={p}: dims sum to {total}");
            let labels: BTreeSet<RootVector> = blocks.iter().map(|b| b.theta.clone()).collect();
            ensure!(labels.len() == blocks.len(), "n={n} p={p}: repeated label");
            let contents: BTreeSet<RootVector> =
                p_strict_partitions(n, p).iter().map(|l| content(l, p)).collect::<Result<_, _>>().map_err(err)?;
            ensure!(labels == contents, "n={n} p={p}: labels differ from contents");
            let cores = labels_with_cores(n, p).map_err(err)?;
            ensure!(cores.values().all(|c| c.len() == 1), "n={n} p={p}: a label has several cores");
            let distinct: BTreeSet<&Partition> = cores.values().map(|c| &c[0]).collect();
            ensure!(distinct.len() == cores.len(), "n={n} p={p}: a core has several labels");
            let got: BTreeMap<RootVector, u128> = blocks.iter().map(|b| (b.theta.clone(), b.dimension)).collect();
            ensure!(got == block_dims_from_partitions(n, p).map_err(err)?, "n={n} p={p}: block dimensions");
        }
    }
    Ok(())
}

fn hd_generator(h: &Hd, rng: &mut StdRng) -> HdElement {
    let d = h.d;
    match rng.gen_range(0..3) {
        0 => h.z(rng.gen_range(0..d)),
        1 if d > 1 => h.s(rng.gen_range(0..d - 1)),
        _ => {
            let lab = h.a.labels[rng.gen_range(0..h.a.dim())].clone();
            h.single(rng.gen_range(0..d), &lab)
        }
    }
}

fn algebra_engine() -> Result<(), String> {
    for k in 1..=4 {
        let a = build_a(k).map_err(err)?;
        ensure!(is_associative(&a), "A_{k} not associative");
        ensure!(!determinant(&gram_matrix(&a)).eq(&0.into()), "A_{k} trace form degenerate");
        let b = build_b(k).map_err(err)?;
        ensure!(is_associative(&b.algebra), "B_{k} not associative");
        ensure!(check_zigzag_iso(k).map_err(err)?.all(), "zigzag isomorphism fails for l={k}");
        ensure!(is_associative(&clifford(k)), "C_{k} not associative");
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0013);
    let algebras: Vec<Hd> = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]
        .iter()
        .map(|&(l, d)| Hd::new(l, d))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let mut tested = 0;
    while tested < 200 {
        let h = &algebras[rng.gen_range(0..algebras.len())];
        let x = hd_generator(h, &mut rng);
        let y = hd_generator(h, &mut rng);
        let z = hd_generator(h, &mut rng);
        ensure!(
            h.mul(&h.mul(&x, &y), &z) == h.mul(&x, &h.mul(&y, &z)),
            "H_d(l={}, d={}) triple {} {} {}",
            h.ell,
            h.d,
            tested,
            x.z_degree(),
            y.z_degree()
        );
        tested += 1;
    }
    Ok(())
}

fn invariant_suites() -> Result<(), String> {
    for p in [3, 5, 7] {
        let ell = (p - 1) / 2;
        let marks = coroot_marks(ell);
        for n in 0..=12 {
            for l in p_strict_partitions(n, p) {
                let m = Multipartition::single(l.clone());
                let cont = multi_content(&m, p).map_err(err)?;
                let mut total = 0;
                for i in 0..=ell {
                    let s = node_sets(&m, i, p);
                    let diff = s.addable.len() as i64 - s.removable.len() as i64;
                    let lam0 = 2 * fundamental_pairing(ell, i, 0) / simple_norm(ell, i);
                    ensure!(diff == lam0 - coroot_pairing(i, &cont).map_err(err)?, "{l:?} i={i}");
                    total += marks[i] * diff;
                }
                ensure!(total == 1, "defect of {l:?} at p={p} is {total}");

                let c_ell = cont.coeffs().ok_or("half-integral content")?[ell];
                let b = b_counts(&l, p);
                let rhs: i64 = (ell + 1..p).map(|i| (p - i) as i64 * b[i] as i64).sum::<i64>()
                    - (1..=ell).map(|i| i as i64 * b[i] as i64).sum::<i64>();
                ensure!(p as i64 * c_ell - n as i64 == rhs, "{l:?} at p={p}: {} vs {rhs}", p as i64 * c_ell - n as i64);
            }
        }
    }
    Ok(())
}

fn sergeev_level_one() -> Result<(), String> {
    for n in 1..=4 {
        for p in [3, 5] {
            let r = sergeev_iso_check(n, p).map_err(err)?;
            ensure!(r.passed(), "Sergeev n={n} p={p}: {r:?}");
            ensure!(levelone_jm_check(n, p).map_err(err)?, "level one n={n} p={p}");
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Check, Duration); 15] = [
        ("bar core and quotient example", core_quotient, Duration::from_millis(100)),
        ("graded dimension values", graded_dims, Duration::from_secs(5)),
        ("graded at q=1 equals ungraded", specialization, Duration::from_secs(60)),
        ("Fock form direct vs tableau sum", fock_cross_check, Duration::from_secs(120)),
        ("F_0 action example", fock_example, Duration::from_secs(5)),
        ("E/F commutation relations", serre, Duration::from_secs(60)),
        ("cuspidal words", cuspidal, Duration::from_secs(30)),
        ("Y_d dimension identities", yd_dimensions, Duration::from_secs(60)),
        ("strict Kostka square sum", strict_kostka_identity, Duration::from_secs(30)),
        ("slide sequence counts", slide_sequences, Duration::from_secs(60)),
        ("weight one RoCK dimensions", weight_one, Duration::from_secs(300)),
        ("superblocks", superblock_labels, Duration::from_secs(600)),
        ("algebra engine", algebra_engine, Duration::from_secs(60)),
        ("defect and bead-count identities", invariant_suites, Duration::from_secs(60)),
        ("Sergeev and level one checks", sergeev_level_one, Duration::from_secs(60)),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match outcome {
            Ok(()) if elapsed > *limit => Err("time limit exceeded".to_string()),
            other => other,
        };
        let secs = elapsed.as_secs_f64();
        let lim = limit.as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.3}s, limit {lim}s)", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.3}s, limit {lim}s): {e}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
