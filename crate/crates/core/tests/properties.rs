use std::f64::consts::PI;

use fresnel_channel::fresnel::{fr_term, fresnel_cs, ExtReal, SPEED_OF_LIGHT};
use fresnel_channel::geometry::{fresnel_zone_clear, mirror_point, rho_param, Point2, Segment, WallAperture};
use fresnel_channel::propagation::{direct_component, received_power, Antenna, ChannelEvaluator, Transmitter};
use fresnel_channel::scenario::{roughen, Reflector, RoughnessSpec};
use proptest::prelude::*;

/// Composite Gauss-Legendre (5 points per panel) over [0, w].
fn quadrature(w: f64) -> (f64, f64) {
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683,
        0.538_469_310_105_683,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
        0.236_926_885_056_189,
    ];
    let panels = (w.abs() * 200.0).ceil().max(1.0) as usize;
    let h = w / panels as f64;
    let (mut c, mut s) = (0.0, 0.0);
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (x, wt) in X.iter().zip(W) {
            let q = mid + 0.5 * h * x;
            let a = 0.5 * PI * q * q;
            c += 0.5 * h * wt * a.cos();
            s += 0.5 * h * wt * a.sin();
        }
    }
    (c, s)
}

fn pt() -> impl Strategy<Value = Point2> {
    (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

proptest! {
    #[test]
    fn fresnel_matches_quadrature(w in -10.0..10.0f64) {
        let ours = fresnel_cs(w).unwrap();
        let (c, s) = quadrature(w);
        prop_assert!((ours.c - c).abs() < 1e-9 && (ours.s - s).abs() < 1e-9);
    }

    #[test]
    fn fresnel_is_odd(w in -20.0..20.0f64) {
        let a = fresnel_cs(w).unwrap();
        let b = fresnel_cs(-w).unwrap();
        prop_assert!((a.c + b.c).abs() < 1e-14 && (a.s + b.s).abs() < 1e-14);
    }

    #[test]
    fn aperture_terms_add(a in -8.0..8.0f64, b in -8.0..8.0f64, c in -8.0..8.0f64) {
        let whole = fr_term(a, c).unwrap().value;
        let split = fr_term(a, b).unwrap().value + fr_term(b, c).unwrap().value;
        prop_assert!((whole - split).norm() < 1e-12);
    }

    #[test]
    fn open_aperture_splits_at_any_point(b in -8.0..8.0f64) {
        let open = fr_term(ExtReal::NegInf, ExtReal::PosInf).unwrap().value;
        let split = fr_term(ExtReal::NegInf, b).unwrap().value + fr_term(b, ExtReal::PosInf).unwrap().value;
        prop_assert!((open - split).norm() < 1e-12);
    }

    #[test]
    fn mirror_is_an_involution(p in pt(), c in pt(), len in 0.1..10.0f64, angle in 0.0..360.0f64) {
        let seg = Segment::new(c, len, angle);
        let back = mirror_point(mirror_point(p, &seg), &seg);
        prop_assert!(back.distance(p) < 1e-9 * (1.0 + p.norm() + c.norm()));
        let m = mirror_point(p, &seg);
        prop_assert!((seg.signed_distance(m) + seg.signed_distance(p)).abs() < 1e-9 * (1.0 + p.norm() + c.norm()));
    }

    #[test]
    fn rho_is_below_both_legs(r1 in 1e-3..1e4f64, r2 in 1e-3..1e4f64) {
        let rho = rho_param(r1, r2).unwrap();
        prop_assert!(rho > 0.0 && rho <= r1.min(r2) * (1.0 + 1e-12) && rho >= 0.5 * r1.min(r2) * (1.0 - 1e-12));
    }

    #[test]
    fn clear_zone_stays_clear_at_shorter_wavelength(
        rx in pt(), lambda in 0.005..0.5f64, ratio in 0.05..1.0f64, edge_y in -5.0..5.0f64,
    ) {
        let tx = Point2::new(-20.0, 0.0);
        let walls = WallAperture::new(Point2::new(-10.0, 0.0), 90.0, ExtReal::NegInf, ExtReal::Finite(edge_y)).wall_segments(1e3);
        if fresnel_zone_clear(tx, rx, lambda, &walls) {
            prop_assert!(fresnel_zone_clear(tx, rx, lambda * ratio, &walls));
        }
    }

    #[test]
    fn open_direct_path_is_friis(
        tx in pt(), rx in pt(), power in 0.01..10.0f64, g_tx in 0.5..20.0f64, g_rx in 0.5..20.0f64, f in 1e9..100e9f64,
    ) {
        prop_assume!(tx.distance(rx) > 0.1);
        let t = Transmitter { gain: g_tx, ..Transmitter::isotropic(tx, power) };
        let lambda = SPEED_OF_LIGHT / f;
        let p = received_power(&[direct_component(&t, rx, f).unwrap()], &Antenna::Isotropic { gain: g_rx.sqrt() }, lambda).unwrap();
        let friis = power * g_tx * g_rx * (lambda / (4.0 * PI * tx.distance(rx))).powi(2);
        prop_assert!(((p - friis) / friis).abs() < 1e-9);
    }

    /// Scaling every length and the wavelength by k leaves all Fresnel
    /// arguments and phases unchanged, so h only picks up the 1/k spreading.
    #[test]
    fn geometry_and_wavelength_scaling(k in 0.2..5.0f64, x in 0.0..20.0f64, edge in -3.0..0.0f64) {
        let build = |k: f64| {
            let tx = Transmitter::isotropic(Point2::new(-5.0 * k, -3.0 * k), 1.0).with_aperture(WallAperture::new(
                Point2::new(-3.0 * k, 0.0), 90.0, ExtReal::NegInf, ExtReal::Finite(edge * k)));
            let refl = vec![Reflector::facing(Point2::new(6.0 * k, -1.0 * k), 1.5 * k, 135.0)];
            (tx, refl)
        };
        let f = 2.4e9;
        let (t1, r1) = build(1.0);
        let (tk, rk) = build(k);
        let ant = Antenna::default();
        let h1 = ChannelEvaluator::new(&t1, &r1, &ant, f).unwrap().total(Point2::new(x, 10.0));
        let hk = ChannelEvaluator::new(&tk, &rk, &ant, f / k).unwrap().total(Point2::new(x * k, 10.0 * k));
        prop_assert!((hk * k - h1).norm() <= 1e-9 * (1.0 + h1.norm()));
    }

    #[test]
    fn roughen_pieces_stay_within_offset(seed in any::<u64>(), sub in 0.05..0.6f64, off in 0.0..0.1f64) {
        let parent = Reflector::facing(Point2::new(6.0, -1.0), 1.5, 140.0);
        let pieces = roughen(&parent.clone().with_roughness(RoughnessSpec { sub_length: sub, max_offset: off, seed_offset: 0 }), seed);
        prop_assert_eq!(pieces.len(), (1.5 / sub - 1e-9).ceil() as usize);
        let total: f64 = pieces.iter().map(|p| p.geometry.length).sum();
        prop_assert!((total - 1.5).abs() < 1e-9);
        for p in &pieces {
            prop_assert!(parent.geometry.signed_distance(p.geometry.center).abs() <= off + 1e-12);
            prop_assert!((p.geometry.angle_deg - parent.geometry.angle_deg).abs() < 1e-12);
        }
    }
}
