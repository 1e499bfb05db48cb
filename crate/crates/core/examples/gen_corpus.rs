//! Regenerates `corpus/standing.txt`:
//!
//! ```text
//! cargo run -p hderiv-core --example gen_corpus > crates/core/corpus/standing.txt
//! ```
//!
//! Closed forms first, then seeded random composites. Points lie in `|z| <= 3`
//! and keep every `inv`/`/`/`ln` argument at least `MARGIN` from its singular set.

use hderiv::expr::{self, EvalContext, Expr, Func};
use hderiv::Quaternion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;
const MARGIN: f64 = 0.5;
const MAX_VALUE: f64 = 50.0;
const POINTS_PER_EXPR: usize = 3;
const RANDOM_EXPRS: usize = 20;

const CLOSED_FORMS: &[&str] = &[
    "z",
    "z^2",
    "z^3",
    "z^4",
    "z^5",
    "z^6",
    "z^7",
    "z^8",
    "z^-1",
    "z^-2",
    "z^-3",
    "z^-4",
    "exp(z)",
    "sin(z)",
    "cos(z)",
    "inv(z)",
    "inv(2 - z)",
    "1/((2+i) - z)",
    "(1-2i+0.5k)*z + (3+j)",
    "z*(1-2i+0.5k) + (3+j)",
    "i*z*j",
    "z*z*z - z^3",
    "exp(z)*sin(z)",
    "sin(z)/cos(z)",
    "inv(cos(z))*sin(z)",
    "exp(z^2)",
    "sin(z)^2 + cos(z)^2",
    "ln(z)",
];

fn random_point(rng: &mut impl Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        if q.norm() <= 3.0 {
            // two decimals keep the corpus readable
            let r = |x: f64| (x * 100.0).round() / 100.0;
            return Quaternion::new(r(q.x0), r(q.x1), r(q.x2), r(q.x3));
        }
    }
}

fn random_constant(rng: &mut impl Rng) -> Expr {
    let mut c = [0.0; 4];
    for x in c.iter_mut() {
        if rng.gen_bool(0.5) {
            *x = rng.gen_range(-20i32..=20) as f64 / 10.0;
        }
    }
    if c == [0.0; 4] {
        c[0] = 1.0;
    }
    Expr::constant(Quaternion::from_array(c))
}

fn random_expr(rng: &mut impl Rng, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.7) {
            Expr::var()
        } else {
            random_constant(rng)
        };
    }
    let sub = |rng: &mut _| random_expr(rng, depth - 1);
    match rng.gen_range(0..9) {
        0 => Expr::add(sub(rng), sub(rng)),
        1 => Expr::sub(sub(rng), sub(rng)),
        2 | 3 => Expr::mul(sub(rng), sub(rng)),
        4 => Expr::div(sub(rng), sub(rng)),
        5 => Expr::pow(sub(rng), [2, 3, -1, -2][rng.gen_range(0..4)]),
        6 => Expr::neg(sub(rng)),
        _ => {
            let f = [Func::Exp, Func::Sin, Func::Cos, Func::Ln, Func::Inv][rng.gen_range(0..5)];
            Expr::call(f, sub(rng))
        }
    }
}

fn is_composite(e: &Expr) -> bool {
    let text = e.to_string();
    e.contains_var() && text.contains('(') && text.matches('z').count() >= 2
}

fn admissible(e: &Expr, z0: Quaternion, ctx: &EvalContext) -> bool {
    let ok = |r: Result<Quaternion, _>| {
        r.map(|q| q.is_finite() && q.norm() <= MAX_VALUE)
            .unwrap_or(false)
    };
    e.singularity_margin(z0, ctx)
        .map(|m| m >= MARGIN)
        .unwrap_or(false)
        && ok(expr::evaluate(e, z0, ctx))
        && ok(expr::differentiate(e, z0, ctx))
}

fn points_for(e: &Expr, rng: &mut impl Rng, ctx: &EvalContext) -> Option<Vec<Quaternion>> {
    let mut out = Vec::new();
    for _ in 0..200 {
        let z0 = random_point(rng);
        if admissible(e, z0, ctx) {
            out.push(z0);
            if out.len() == POINTS_PER_EXPR {
                return Some(out);
            }
        }
    }
    None
}

fn emit(text: &str, points: &[Quaternion]) {
    for p in points {
        println!("{text} ; {p}");
    }
}

fn main() {
    let ctx = EvalContext::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    println!("# Standing regression corpus: `EXPR ; POINT` per line.");
    println!(
        "# Generated by examples/gen_corpus.rs (seed {SEED:#x}); edit that file, not this one."
    );
    println!();
    println!("# closed forms");
    for text in CLOSED_FORMS {
        let e = expr::parse(text).expect("closed form parses");
        let points = points_for(&e, &mut rng, &ctx).expect("closed form has admissible points");
        emit(text, &points);
    }
    println!();
    println!("# random composites");
    let mut made = 0;
    while made < RANDOM_EXPRS {
        let e = random_expr(&mut rng, 3);
        if !is_composite(&e) {
            continue;
        }
        if let Some(points) = points_for(&e, &mut rng, &ctx) {
            emit(&e.to_string(), &points);
            made += 1;
        }
    }
}
