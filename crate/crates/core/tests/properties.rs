use num_bigint::BigInt;
use proptest::prelude::*;

use sqfree_core::certificate::Certificate;
use sqfree_core::fp::{self, lp_length, FpPoly};
use sqfree_core::gf2::{self, decompose, lemma55_construct, Gf2Poly, Lemma55Outcome};
use sqfree_core::neighborhood::{enumerate_neighbors, nearest_squarefree, thm13_construct};
use sqfree_core::text::{format_poly, parse_int, parse_rat};
use sqfree_core::totient::phi_sieve;
use sqfree_core::zpoly::{self, height, length};
use sqfree_core::{IntPoly, RatPoly};

fn int_poly(max_deg: usize, h: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-h..=h, 1..=max_deg + 1)
        .prop_map(|c| IntPoly::new(c.into_iter().map(BigInt::from).collect()))
}

fn nonzero_poly(max_deg: usize, h: i64) -> impl Strategy<Value = IntPoly> {
    int_poly(max_deg, h).prop_filter("nonzero", |f| !f.is_zero())
}

fn gf2_poly(max_bits: u32) -> impl Strategy<Value = Gf2Poly> {
    prop::collection::vec(any::<u64>(), 1..=2).prop_map(move |w| {
        let mut words = w;
        if max_bits <= 64 {
            words.truncate(1);
            words[0] &= if max_bits == 64 { u64::MAX } else { (1 << max_bits) - 1 };
        }
        Gf2Poly::from_words(words)
    })
}

proptest! {
    #[test]
    fn text_round_trip(f in int_poly(12, 1000)) {
        prop_assert_eq!(parse_int(&format_poly(&f)).unwrap(), f);
    }

    #[test]
    fn ring_laws(f in int_poly(8, 50), g in int_poly(8, 50), h in int_poly(4, 50)) {
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!(length(&(&f + &g)) <= length(&f) + length(&g));
        prop_assert!(height(&f) <= length(&f));
    }

    #[test]
    fn rational_division(f in int_poly(10, 30), g in nonzero_poly(5, 30)) {
        let (fr, gr) = (zpoly::to_rat(&f), zpoly::to_rat(&g));
        let (q, r) = fr.div_rem(&gr);
        prop_assert_eq!(&(&q * &gr) + &r, fr);
        prop_assert!(r.is_zero() || r.deg() < gr.deg());
    }

    #[test]
    fn squarefree_tests_agree(f in nonzero_poly(9, 12)) {
        let a = zpoly::is_squarefree_z(&f).unwrap();
        prop_assert_eq!(a, zpoly::is_squarefree_by_resultant(&f).unwrap());
        prop_assert_eq!(a, zpoly::square_witness(&f).unwrap().is_none());
        prop_assert!(Certificate::for_int(&f).unwrap().recheck().unwrap());
    }

    #[test]
    fn squares_are_caught(w in nonzero_poly(3, 5), g in nonzero_poly(4, 5)) {
        prop_assume!(w.deg() >= 1);
        let f = &(&w * &w) * &g;
        prop_assert!(!zpoly::is_squarefree_z(&f).unwrap());
        let cert = Certificate::for_int(&f).unwrap();
        let square = matches!(cert, Certificate::SquareDivisor { .. });
        prop_assert!(square);
        prop_assert!(cert.recheck().unwrap());
    }

    #[test]
    fn tails_above_derivative_length(f in nonzero_poly(5, 4), extra in 1usize..15) {
        prop_assume!(f.deg() >= 1);
        let n = zpoly::length(&f.derivative()).try_into().unwrap_or(0usize) + extra;
        let g = thm13_construct(&f, n).unwrap();
        prop_assert!(zpoly::is_squarefree_by_resultant(&g).unwrap());
    }

    #[test]
    fn ball_members_are_close(f in nonzero_poly(4, 3), budget in 0usize..=2) {
        let cap = f.deg();
        let ball = enumerate_neighbors(&f, budget, cap, false).unwrap();
        let mut seen = std::collections::HashSet::new();
        for g in &ball {
            prop_assert!(seen.insert(format_poly(g)), "duplicate {}", format_poly(g));
            prop_assert!(length(&(g - &f)) <= BigInt::from(budget));
            prop_assert!(!g.is_zero() && g.deg() <= cap);
        }
        let rep = nearest_squarefree(&f, budget, cap, false).unwrap();
        let first = ball.iter().find(|g| zpoly::is_squarefree_z(g).unwrap());
        prop_assert_eq!(rep.found.map(|x| x.g), first.cloned());
    }

    #[test]
    fn gf2_decomposition(f in gf2_poly(128)) {
        let pair = decompose(&f);
        prop_assert_eq!(pair.recompose(), f.clone());
        prop_assert_eq!(f.derivative(), pair.fo.square());
        prop_assume!(!f.is_zero());
        prop_assert_eq!(gf2::is_squarefree_2(&f).unwrap(), gf2::is_squarefree_classical(&f).unwrap());
    }

    #[test]
    fn gf2_division(a in gf2_poly(128), b in gf2_poly(64)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(q.mul(&b).add(&r), a.clone());
        prop_assert!(r.is_zero() || r.deg() < b.deg());
        let g = a.gcd(&b);
        prop_assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn gf2_text(f in gf2_poly(128)) {
        prop_assert_eq!(f.to_string().parse::<Gf2Poly>().unwrap(), f.clone());
        prop_assert_eq!(Gf2Poly::parse_any(&f.to_sparse()).unwrap(), f);
    }

    #[test]
    fn gf2_against_f2(f in gf2_poly(20)) {
        prop_assume!(!f.is_zero());
        let g = f.to_fp();
        prop_assert_eq!(fp::is_squarefree_p(&g).unwrap(), gf2::is_squarefree_2(&f).unwrap());
        prop_assert_eq!(lp_length(&g), f.weight() as u64);
    }

    #[test]
    fn lemma55_outputs(w in any::<u64>(), d in 9u32..40) {
        let f = Gf2Poly::from_word((w & ((1 << d) - 1)) | 1 << d);
        if let Lemma55Outcome::Constructed { g, .. } = lemma55_construct(&f).unwrap() {
            prop_assert!(gf2::is_squarefree_classical(&g).unwrap());
            prop_assert_eq!(g.deg(), f.deg());
            prop_assert!(g.add(&f).weight() <= 1);
        }
    }

    #[test]
    fn fp_balanced_is_minimal(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), c in prop::collection::vec(-40i64..40, 1..8)) {
        let f = FpPoly::new(p, &c).unwrap();
        for (k, &b) in f.coeffs().iter().enumerate() {
            // balanced value is the smallest-magnitude representative
            prop_assert!(2 * b.unsigned_abs() <= p);
            prop_assert_eq!((b - c.get(k).copied().unwrap_or(0)).rem_euclid(p as i64), 0);
        }
        prop_assert_eq!(FpPoly::parse(p, &f.to_string()).unwrap(), f.clone());
        prop_assert_eq!(lp_length(&f), f.coeffs().iter().map(|b| b.unsigned_abs()).sum::<u64>());
    }

    #[test]
    fn fp_division(p in prop::sample::select(vec![3u64, 7, 1_000_000_007]), a in prop::collection::vec(-50i64..50, 1..10), b in prop::collection::vec(-50i64..50, 1..6)) {
        let (a, b) = (FpPoly::new(p, &a).unwrap(), FpPoly::new(p, &b).unwrap());
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(q.mul(&b).add(&r), a.clone());
        let g = a.gcd(&b);
        prop_assert!(g.divides(&a) && g.divides(&b));
        prop_assert!(Certificate::for_fp(&a.add(&FpPoly::one(p))).map(|c| c.recheck().unwrap()).unwrap_or(true));
    }
}

#[test]
fn totient_is_multiplicative() {
    let t = phi_sieve(5000);
    for a in 1..70usize {
        for b in 1..70usize {
            if num_integer::gcd(a, b) == 1 {
                assert_eq!(t.phi(a * b) as u64, t.phi(a) as u64 * t.phi(b) as u64);
            }
        }
    }
}

#[test]
fn rational_text() {
    let f: RatPoly = parse_rat("1/2*x^2 - 3/4").unwrap();
    assert_eq!(format_poly(&f), "1/2*x^2 - 3/4");
}
