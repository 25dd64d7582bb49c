use mahler::measure::{mahler_jensen1d, mahler_quad2d, QuadConfig};
use mahler::polyio::{parse_poly, BiPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REGRESSION: [&str; 6] = [
    "-2y^2+2xy+6y+2x+1",
    "x^2-2xy+y^2-4y+4",
    "x+y-4xy+x^2y+xy^2",
    "y^2+y(x+1)+x^2+x+1",
    "(x(x+1)^5 - y(y+1)^5)/(x-y)",
    "1+x+y",
];

#[test]
fn jensen_and_torus_average_agree() {
    for text in REGRESSION {
        let p = parse_poly(text).unwrap();
        let a = mahler_jensen1d(&p, &QuadConfig::default()).unwrap();
        let b = mahler_quad2d(&p, 512);
        println!("{text}: jensen {} ± {:e}, quad2d {} ± {:e}", a.value, a.error_bound, b.value, b.error_bound);
        assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound, "{text}");
    }
}

fn random_poly(rng: &mut ChaCha8Rng) -> BiPoly {
    loop {
        let terms: Vec<((u32, u32), i64)> = (0..4)
            .map(|_| ((rng.gen_range(0..3), rng.gen_range(0..3)), rng.gen_range(-3..=3)))
            .collect();
        if let Ok(p) = BiPoly::from_i64(&terms) {
            if p.deg_y() > 0 {
                return p;
            }
        }
    }
}

#[test]
fn additivity_and_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = QuadConfig::default();
    for _ in 0..8 {
        let p = random_poly(&mut rng);
        let q = random_poly(&mut rng);
        let mp = mahler_jensen1d(&p, &cfg).unwrap();
        let mq = mahler_jensen1d(&q, &cfg).unwrap();
        let mpq = mahler_jensen1d(&(&p * &q), &cfg).unwrap();
        let slack = mp.error_bound + mq.error_bound + mpq.error_bound;
        assert!((mpq.value - mp.value - mq.value).abs() <= slack.max(1e-9), "{p} * {q}");
        if p.deg_x() > 0 {
            let sw = mahler_jensen1d(&p.swap_xy(), &cfg).unwrap();
            assert!((sw.value - mp.value).abs() <= (sw.error_bound + mp.error_bound).max(1e-9), "{p}");
        }
    }
}
