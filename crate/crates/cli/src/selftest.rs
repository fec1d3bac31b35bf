//! Exhaustive and sampled checks of the group laws over a small prime.

use std::io::Write;
use std::time::{Duration, Instant};

use algid::analysis::{empirical_census, MAX_CENSUS_PRIME};
use algid::{ElementClass, Error, GroupParams, UtElement};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest number of ordered pairs enumerated one by one.
const MAX_BRUTE_PAIRS: u64 = 250_000_000;

struct Deadline(Instant);

impl Deadline {
    fn check(&self) -> Result<(), String> {
        if Instant::now() > self.0 {
            Err("time budget exhausted".into())
        } else {
            Ok(())
        }
    }
}

type Check = fn(GroupParams, &[UtElement], &Deadline) -> Result<String, String>;

/// Runs every check at prime `p`, printing one line per check. Returns
/// whether all passed within `budget`.
pub fn run(p: u64, budget: Duration, out: &mut impl Write) -> algid::Result<bool> {
    if p > MAX_CENSUS_PRIME {
        return Err(Error::RefusedSize(p));
    }
    let params = GroupParams::test(p)?;
    let deadline = Deadline(Instant::now() + budget);
    let all: Vec<UtElement> = (0..p.pow(6))
        .map(|r| UtElement::from_rank_u64(params, r))
        .collect::<algid::Result<_>>()?;
    let checks: [(&str, Check); 9] = [
        ("rank bijection and classes", rank_bijection),
        ("matrix product", matrix_product),
        ("inverses", inverses),
        ("element orders", element_orders),
        ("commuting pairs", commuting_pairs),
        ("commuting subgroup", commuting_subgroup),
        ("associativity", associativity),
        ("lift involution", lift_involution),
        ("repetition limit", repetition_limit),
    ];
    let mut passed = true;
    for (name, check) in checks {
        let start = Instant::now();
        let result = deadline.check().and_then(|_| check(params, &all, &deadline));
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        passed &= result.is_ok();
        let _ = writeln!(
            out,
            "{tag} {name}: {detail} [{:.2}s]",
            start.elapsed().as_secs_f64()
        );
    }
    let _ = writeln!(out, "{}", if passed { "selftest passed" } else { "selftest FAILED" });
    Ok(passed)
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5e1f_7e57)
}

fn random(r: &mut impl Rng, all: &[UtElement]) -> UtElement {
    all[r.gen_range(0..all.len())]
}

fn rank_bijection(params: GroupParams, all: &[UtElement], _: &Deadline) -> Result<String, String> {
    let p = params.p();
    for (r, e) in all.iter().enumerate() {
        let r = r as u64;
        if e.rank() != BigUint::from(r) {
            return Err(format!("rank {r} does not round-trip"));
        }
        let expected = match r {
            0 => ElementClass::Identity,
            r if r < p => ElementClass::Center,
            r if r < p.pow(4) => ElementClass::Hybrid,
            _ => ElementClass::Ordered,
        };
        if e.classify() != expected {
            return Err(format!("rank {r} classified as {}", e.classify()));
        }
    }
    Ok(format!("{} ranks", all.len()))
}

/// Product of explicit 4×4 upper unitriangular matrices modulo `p`.
fn via_matrices(a: &UtElement, b: &UtElement) -> [u64; 6] {
    let p = a.params().p();
    let m = |e: &UtElement| {
        let c = e.cells();
        [
            [1, c[0], c[1], c[2]],
            [0, 1, c[3], c[4]],
            [0, 0, 1, c[5]],
            [0, 0, 0, 1],
        ]
    };
    let (x, y) = (m(a), m(b));
    let at = |i: usize, j: usize| (0..4).map(|k| x[i][k] * y[k][j]).sum::<u64>() % p;
    [at(0, 1), at(0, 2), at(0, 3), at(1, 2), at(1, 3), at(2, 3)]
}

fn matrix_product(_: GroupParams, all: &[UtElement], d: &Deadline) -> Result<String, String> {
    let mut r = rng();
    for i in 0..100_000 {
        if i % 10_000 == 0 {
            d.check()?;
        }
        let (a, b) = (random(&mut r, all), random(&mut r, all));
        if (a * b).cells() != via_matrices(&a, &b) {
            return Err(format!("{} * {}", a.rank(), b.rank()));
        }
    }
    Ok("100000 random pairs".into())
}

fn inverses(params: GroupParams, all: &[UtElement], _: &Deadline) -> Result<String, String> {
    let e = UtElement::identity(params);
    for a in all {
        if *a * a.inverse() != e || a.inverse() * *a != e {
            return Err(format!("rank {}", a.rank()));
        }
    }
    Ok(format!("{} elements", all.len()))
}

fn element_orders(params: GroupParams, all: &[UtElement], d: &Deadline) -> Result<String, String> {
    let p = params.p();
    let census = empirical_census(p).map_err(|e| e.to_string())?;
    d.check()?;
    let n = all.len() as u64;
    let expected = [(1, 1), (p, n - 1)].into_iter().collect();
    if census.order_histogram != expected {
        return Err(format!("histogram {:?}", census.order_histogram));
    }
    Ok(format!("{} elements of order {p}", n - 1))
}

fn commuting_pairs(params: GroupParams, all: &[UtElement], d: &Deadline) -> Result<String, String> {
    let p = params.p() as u128;
    let expected = (2 * p.pow(3) + p.pow(2) - 2 * p) * p.pow(6);
    let census = empirical_census(params.p()).map_err(|e| e.to_string())?;
    if census.commuting_pairs != expected {
        return Err(format!("centralizers give {}, expected {expected}", census.commuting_pairs));
    }
    let n = all.len() as u64;
    if n * n > MAX_BRUTE_PAIRS {
        return Ok(format!("{expected} (centralizers only)"));
    }
    let mut brute = 0u128;
    for (i, a) in all.iter().enumerate() {
        if i % 1000 == 0 {
            d.check()?;
        }
        brute += all.iter().filter(|b| *a * **b == **b * *a).count() as u128;
    }
    if brute != expected {
        return Err(format!("enumeration gives {brute}, expected {expected}"));
    }
    Ok(format!("{expected} (enumerated and by centralizers)"))
}

fn commuting_subgroup(params: GroupParams, all: &[UtElement], d: &Deadline) -> Result<String, String> {
    let sub = &all[..params.p().pow(4) as usize];
    let bound = BigUint::from(sub.len());
    let check = |a: &UtElement, b: &UtElement| {
        let ab = *a * *b;
        if ab != *b * *a || ab.rank() >= bound {
            Err(format!("{} and {}", a.rank(), b.rank()))
        } else {
            Ok(())
        }
    };
    let n = sub.len() as u64;
    if n * n <= MAX_BRUTE_PAIRS {
        for (i, a) in sub.iter().enumerate() {
            if i % 100 == 0 {
                d.check()?;
            }
            for b in sub {
                check(a, b)?;
            }
        }
        return Ok(format!("{n} elements, all pairs"));
    }
    let mut r = rng();
    for i in 0..1_000_000 {
        if i % 10_000 == 0 {
            d.check()?;
        }
        check(&random(&mut r, sub), &random(&mut r, sub))?;
    }
    Ok(format!("{n} elements, 1000000 random pairs"))
}

fn associativity(_: GroupParams, all: &[UtElement], _: &Deadline) -> Result<String, String> {
    let mut r = rng();
    for _ in 0..10_000 {
        let (a, b, c) = (random(&mut r, all), random(&mut r, all), random(&mut r, all));
        if (a * b) * c != a * (b * c) {
            return Err(format!("{} {} {}", a.rank(), b.rank(), c.rank()));
        }
    }
    Ok("10000 random triples".into())
}

fn lift_involution(_: GroupParams, all: &[UtElement], _: &Deadline) -> Result<String, String> {
    match all.iter().find(|a| a.lift().lift() != **a) {
        Some(a) => Err(format!("rank {}", a.rank())),
        None => Ok(format!("{} elements", all.len())),
    }
}

fn repetition_limit(params: GroupParams, all: &[UtElement], _: &Deadline) -> Result<String, String> {
    let p = params.p();
    let mut r = rng();
    for _ in 0..1000 {
        let (u, f, g) = (random(&mut r, all), random(&mut r, all), random(&mut r, all));
        if u * (f * g).pow_u64(p) != u {
            return Err(format!("u={} f={} g={}", u.rank(), f.rank(), g.rank()));
        }
    }
    Ok(format!("u(fg)^{p} = u for 1000 random triples"))
}
