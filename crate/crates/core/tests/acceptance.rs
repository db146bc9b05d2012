//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ellchain_core::chain::{
    canonical_series, count_tableaux, for_each_tableau, hook_length_count, redistribute, validate_lls,
    validate_rank1, LimitLinearSeries,
};
use ellchain_core::elliptic::{LineBundleClass, Slot};
use ellchain_core::independence::{certify_independence, oracle_rank, product_sections, OracleConfig};
use ellchain_core::theorems::{
    endo_build, endo_h0, onto_certificate, onto_pairs, petri_build, petri_certificate, petri_pairs, twisted_series,
    PetriParams, PoinParams, Status, Verdict,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    for g in 2..=50usize {
        let s = canonical_series(g).map_err(|e| e.to_string())?;
        ensure(validate_lls(&s).passes(), || format!("g={g}: validation fails"))?;
        let rep = validate_rank1(&s).map_err(|e| e.to_string())?;
        ensure(rep.refined, || format!("g={g}: not refined"))?;
        let gi = g as i64;
        for (i, t) in s.tables.iter().enumerate() {
            let i = i as i64 + 1;
            let want = (2 * (i - 1), 2 * gi - 2 * i);
            let row = t.rows.iter().find(|r| r.ord_p + r.ord_q == 2 * gi - 2);
            ensure(row.map(|r| (r.ord_p, r.ord_q)) == Some(want), || format!("g={g} C_{i}: distinguished row {row:?}"))?;
        }
    }
    Ok("g = 2..50".into())
}

/// Row-major backtracking written independently of the library.
fn brute_tableaux(g: u32, rows: usize, cols: usize) -> u128 {
    fn go(g: u32, rows: usize, cols: usize, cell: usize, grid: &mut Vec<u32>, used: &mut Vec<bool>) -> u128 {
        if cell == rows * cols {
            return 1;
        }
        let (i, j) = (cell / cols, cell % cols);
        let mut n = 0;
        for v in 1..=g {
            if used[v as usize] || (j > 0 && grid[cell - 1] >= v) || (i > 0 && grid[cell - cols] >= v) {
                continue;
            }
            used[v as usize] = true;
            grid[cell] = v;
            n += go(g, rows, cols, cell + 1, grid, used);
            used[v as usize] = false;
        }
        n
    }
    go(g, rows, cols, 0, &mut vec![0; rows * cols], &mut vec![false; g as usize + 1])
}

fn criterion_2() -> Outcome {
    let mut shapes = 0;
    for g in 1..=10i64 {
        for r in 0..=11i64 {
            for cols in 0..=12i64 {
                if (r + 1) * cols > 12 {
                    continue;
                }
                let d = g + r - cols;
                let fast = count_tableaux(g, r, d).map_err(|e| e.to_string())?;
                let brute = brute_tableaux(g as u32, (r + 1) as usize, cols as usize);
                let mut listed = 0u128;
                for_each_tableau(g, r, d, |_| listed += 1).map_err(|e| e.to_string())?;
                ensure(fast == brute && listed == brute, || format!("(g,r,d)=({g},{r},{d}): {fast} {listed} vs {brute}"))?;
                if g == (r + 1) * cols {
                    let hook = hook_length_count((r + 1) as usize, cols as usize);
                    ensure(fast == hook, || format!("rho=0 ({g},{r},{d}): {fast} vs hook {hook}"))?;
                }
                shapes += 1;
            }
        }
    }
    for g in 2..=20 {
        let n = count_tableaux(g, g - 1, 2 * g - 2).map_err(|e| e.to_string())?;
        ensure(n == 1, || format!("canonical shape g={g}: {n}"))?;
    }
    Ok(format!("{shapes} shapes"))
}

fn random_composition(rng: &mut ChaCha8Rng, total: i64, parts: usize) -> Vec<i64> {
    let mut out = vec![0; parts];
    for _ in 0..total {
        out[(rng.next_u64() % parts as u64) as usize] += 1;
    }
    out
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pool: Vec<LimitLinearSeries> = (2..=9).map(|g| canonical_series(g).unwrap()).collect();
    for p in petri_grid().into_iter().step_by(97) {
        let b = petri_build(&p).unwrap();
        pool.push(b.e_series);
        pool.push(b.dual_series);
    }
    for (g, r, d) in [(4, 2, 4), (5, 3, 6)] {
        pool.push(endo_build(&PoinParams::new(g, r, d).unwrap()).unwrap().twisted);
    }
    let mut identity = 0;
    for n in 0..1000 {
        let s = &pool[(rng.next_u64() % pool.len() as u64) as usize];
        let r = i64::from(s.rank);
        let degs = s.component_degrees();
        let shifts = random_composition(&mut rng, s.a, degs.len());
        let target: Vec<i64> = degs.iter().zip(&shifts).map(|(d, a)| d - s.a * r + a * r).collect();
        let red = redistribute(s, &target).map_err(|e| format!("#{n}: {e}"))?;
        let got: Vec<i64> = red.bundles.iter().map(|b| b.degree()).collect();
        ensure(got == target, || format!("#{n}: degrees {got:?} vs {target:?}"))?;
        ensure(got.iter().sum::<i64>() == s.degree, || format!("#{n}: sum {} vs {}", got.iter().sum::<i64>(), s.degree))?;
        if let Some(flat) = red.series(s) {
            let again = redistribute(&flat, &target).map_err(|e| format!("#{n} identity: {e}"))?;
            ensure(again.bundles == flat.bundles && again.tables == flat.tables, || format!("#{n}: identity moved the series"))?;
            identity += 1;
        }
    }
    Ok(format!("1000 redistributions, {identity} identity checks"))
}

fn petri_grid() -> Vec<PetriParams> {
    let mut out = Vec::new();
    for g in 2..=10 {
        for r in 1..=4 {
            for d in 0..=4 * g {
                for k in 1..=4 * g {
                    if let Ok(p) = PetriParams::new(g, r, d, k) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

const SEEDS: [u64; 3] = [0, 1, 2];

fn cfg(seed: u64) -> OracleConfig {
    OracleConfig { seed, trials: 1, ..OracleConfig::default() }
}

fn criterion_4(verdicts: &mut Vec<Verdict>) -> Outcome {
    let grid = petri_grid();
    for p in &grid {
        let kk = (p.k * p.r * (p.k1 - p.d1 + p.g - 1)) as usize;
        let first = petri_certificate(p, &cfg(SEEDS[0]));
        let tag = format!("({},{},{},{})", p.g, p.r, p.d, p.k);
        ensure(first.status == Status::Proven, || format!("{tag}: {:?} {:?}", first.status, first.diagnostics))?;
        ensure(first.certified() == kk, || format!("{tag}: certified {} vs {kk}", first.certified()))?;
        for &s in &SEEDS {
            let v = if s == SEEDS[0] { first.clone() } else { petri_certificate(p, &cfg(s)) };
            let rank = v.oracle.as_ref().map(|o| o.rank);
            ensure(rank == Some(kk), || format!("{tag} seed {s}: oracle {rank:?} vs {kk}"))?;
        }
        verdicts.push(first);
    }
    let spot = petri_certificate(&PetriParams::new(5, 2, 7, 3).unwrap(), &OracleConfig::default());
    ensure(spot.status == Status::Proven && spot.certified() == 12, || format!("(5,2,7,3): {}", spot.certified()))?;
    Ok(format!("{} admissible tuples, spot (5,2,7,3) = 12", grid.len()))
}

fn criterion_5() -> Outcome {
    let mut n = 0;
    for g in 4..=10i64 {
        for r in 2..=4i64 {
            for d in g..g + r {
                let tag = format!("({g},{r},{d})");
                let p = PoinParams::new(g, r, d).unwrap();
                let b = endo_build(&p).map_err(|e| format!("{tag}: {e}"))?;
                let big_r = r * r - 1;
                let h0 = endo_h0(&b, &OracleConfig::default());
                ensure(h0 == 1, || format!("{tag}: endo_h0 = {h0}"))?;
                let dim = (big_r * (g - 1)) as usize;
                ensure(b.twisted.tables.iter().all(|t| t.dimension() == dim), || format!("{tag}: table dimension"))?;
                // deg K^2 Tr0 = R(4g - 4); no h^1 for positive slope
                let rr = (big_r * (4 * g - 4) - big_r * (g - 1)) as usize;
                for &s in &SEEDS {
                    let v = onto_certificate(&p, &cfg(s));
                    ensure(v.status == Status::Proven, || format!("{tag}: {:?} {:?}", v.status, v.diagnostics))?;
                    let products = v.dimension.as_ref().map_or(0, |d| d.products);
                    ensure(products == rr && v.certified() == rr, || format!("{tag}: {products} products, {} certified, RR {rr}", v.certified()))?;
                    let rank = v.oracle.as_ref().map(|o| o.rank);
                    ensure(rank == Some(rr), || format!("{tag} seed {s}: oracle {rank:?}"))?;
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} triples"))
}

/// What a verdict would need: valid factors, a full certificate, and a full oracle rank.
struct Probe {
    flagged: bool,
    certified: bool,
    rank: usize,
    products: usize,
    distinct: usize,
}

impl Probe {
    fn run(a: &LimitLinearSeries, b: &LimitLinearSeries, pairs: &[(usize, usize)], targets: &[i64]) -> Self {
        let flagged = !validate_lls(a).passes() || !validate_lls(b).passes();
        let distinct = pairs.iter().collect::<BTreeSet<_>>().len();
        let Ok(prod) = product_sections(a, b, pairs) else {
            return Probe { flagged: true, certified: false, rank: 0, products: pairs.len(), distinct };
        };
        let Ok(red) = redistribute(&prod.series, targets) else {
            return Probe { flagged: true, certified: false, rank: 0, products: pairs.len(), distinct };
        };
        let certified = certify_independence(&prod.products, &red).is_ok();
        let rank = oracle_rank(&prod.products, &red, &OracleConfig::default()).map_or(0, |o| o.rank);
        Probe { flagged, certified, rank, products: pairs.len(), distinct }
    }

    fn proven(&self) -> bool {
        !self.flagged && self.certified && self.rank == self.products
    }
}

fn petri_targets(g: usize, r: i64) -> Vec<i64> {
    (0..g).map(|i| if i == 0 || i == g - 1 { r * r } else { 2 * r * r }).collect()
}

fn onto_targets(g: usize, big_r: i64) -> Vec<i64> {
    (1..=g).map(|i| if i == 1 || i + 2 >= g { 3 * big_r } else { 4 * big_r }).collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut caught = [0usize; 3];
    let petri: Vec<PetriParams> = petri_grid().into_iter().filter(|p| p.k * p.kbar() >= 2 && p.g >= 3).collect();
    let pick = |rng: &mut ChaCha8Rng, n: usize| (rng.next_u64() % n as u64) as usize;

    // duplicated products: the certificate must refuse and the rank must fall by one
    for n in 0..20 {
        let (a, b, mut pairs, targets) = if n % 2 == 0 {
            let p = petri[pick(&mut rng, petri.len())];
            let bld = petri_build(&p).unwrap();
            let pairs = petri_pairs(&bld);
            (bld.e_series, bld.dual_series, pairs, petri_targets(p.g as usize, p.r))
        } else {
            let (g, r) = (4 + pick(&mut rng, 4), 2 + pick(&mut rng, 2) as i64);
            let p = PoinParams::new(g as i64, r, g as i64 + pick(&mut rng, r as usize) as i64).unwrap();
            let bld = endo_build(&p).unwrap();
            (bld.canonical, bld.twisted, onto_pairs(g, p.big_r as usize), onto_targets(g, p.big_r))
        };
        let dup = pairs[pick(&mut rng, pairs.len())];
        pairs.push(dup);
        let probe = Probe::run(&a, &b, &pairs, &targets);
        ensure(!probe.proven() && !probe.certified, || format!("duplicate #{n}: certified"))?;
        ensure(probe.rank == probe.distinct && probe.rank < probe.products, || format!("duplicate #{n}: rank {} of {}", probe.rank, probe.products))?;
        caught[0] += 1;
    }

    // lowered vanishing orders on one row of E
    for n in 0..15 {
        let p = petri[pick(&mut rng, petri.len())];
        let mut bld = petri_build(&p).unwrap();
        let gu = p.g as usize;
        let i = pick(&mut rng, gu - 1);
        let t = pick(&mut rng, bld.e_series.dimension);
        let row = &mut bld.e_series.tables[i].rows[t];
        if row.ord_q > 0 {
            row.ord_q -= 1;
        } else {
            bld.e_series.tables[i + 1].rows[t].ord_p -= 1;
        }
        let probe = Probe::run(&bld.e_series, &bld.dual_series, &petri_pairs(&bld), &petri_targets(gu, p.r));
        ensure(probe.flagged || !probe.certified, || format!("lowered #{n}: not caught"))?;
        ensure(!probe.proven(), || format!("lowered #{n}: proven"))?;
        caught[1] += 1;
    }

    // a traceless slot made trivial on a middle component: K (x) O has a special section there
    for n in 0..15 {
        let (g, r) = (4 + pick(&mut rng, 5), 2 + pick(&mut rng, 3) as i64);
        let p = PoinParams::new(g as i64, r, g as i64 + pick(&mut rng, r as usize) as i64).unwrap();
        let mut bld = endo_build(&p).unwrap();
        let i = 1 + pick(&mut rng, g - 2);
        let k = pick(&mut rng, p.big_r as usize);
        bld.tr0[i].slots[k] = Slot::Line(LineBundleClass::new(0, 0));
        let twisted = twisted_series(&p, &bld.tr0).map_err(|e| format!("torsion #{n}: {e}"))?;
        let probe = Probe::run(&bld.canonical, &twisted, &onto_pairs(g, p.big_r as usize), &onto_targets(g, p.big_r));
        ensure(probe.flagged || !probe.certified, || format!("torsion #{n}: not caught"))?;
        ensure(!probe.proven() && probe.rank < probe.products, || format!("torsion #{n}: rank {} of {}", probe.rank, probe.products))?;
        caught[2] += 1;
    }
    Ok(format!("{} duplicate, {} lowered-order, {} torsion-collision mutants refused", caught[0], caught[1], caught[2]))
}

fn criterion_7(verdicts: &[Verdict]) -> Outcome {
    ensure(!verdicts.is_empty(), || "no certified tuples".into())?;
    for v in verdicts {
        let ellchain_core::theorems::VerdictParams::Petri(p) = &v.params else {
            return Err("unexpected verdict kind".into());
        };
        let (g, r) = (p.g, p.r);
        let tag = format!("({},{},{},{})", p.g, r, p.d, p.k);
        let dist = v.distribution.as_ref().ok_or_else(|| format!("{tag}: no distribution audit"))?;
        ensure(dist.sum == r * r * (2 * g - 2), || format!("{tag}: sum {}", dist.sum))?;
        ensure(dist.thresholds.len() == g as usize, || format!("{tag}: {} thresholds", dist.thresholds.len()))?;
        for t in &dist.thresholds {
            let i = t.component as i64 + 1;
            let want_p = (i >= 2).then_some(2 * i - 3);
            let want_q = (i < g).then_some(2 * g - 2 * i - 1);
            ensure(t.quoted_p == want_p && t.quoted_q == want_q, || format!("{tag} C_{i}: quoted {:?} {:?}", t.quoted_p, t.quoted_q))?;
            ensure(t.matches, || format!("{tag} C_{i}: computed ({}, {}) vs quoted", t.computed_p, t.computed_q))?;
        }
    }
    Ok(format!("{} certified tuples audited", verdicts.len()))
}

fn main() -> ExitCode {
    let mut verdicts = Vec::new();
    let mut all = true;
    let mut report = |n: u32, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let (ok, detail) = match out {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {limit:?} budget")),
            Err(e) => (false, e),
        };
        all &= ok;
        println!("criterion {n}: {} ({took:.2?}) {detail}", if ok { "PASS" } else { "FAIL" });
    };
    report(1, Duration::from_secs(1), &mut criterion_1);
    report(2, Duration::from_secs(10), &mut criterion_2);
    report(3, Duration::from_secs(5), &mut criterion_3);
    report(4, Duration::from_secs(120), &mut || criterion_4(&mut verdicts));
    report(5, Duration::from_secs(120), &mut criterion_5);
    report(6, Duration::from_secs(120), &mut criterion_6);
    report(7, Duration::from_secs(5), &mut || criterion_7(&verdicts));
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
