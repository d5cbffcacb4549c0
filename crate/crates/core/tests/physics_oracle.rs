mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tactile_push::dynamics::{
    limit_surface_twist, quasi_static_response, resolve_contact, simulate_tap, ContactMode, TapMotion, Wrench,
    PENETRATION_TOLERANCE,
};
use tactile_push::scene::{shape_by_name, PlanarPose, PlanarSensor, PusherTip, WorldState};

#[test]
fn analytical_response_matches_cone_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut compared, mut agree) = (0, 0);
    for _ in 0..200 {
        let cfg = random_contact(&mut rng);
        let oracle = friction_cone_search(&cfg, 10_000);
        let resp = quasi_static_response(&cfg.shape, &cfg.pose, &cfg.point, &cfg.normal, &cfg.push);
        let got = [resp.twist.vy, resp.twist.vz, resp.twist.omega];
        let cos = cosine(&scaled(&cfg, &got), &scaled(&cfg, &oracle.twist));
        assert!(cos > 0.999, "cosine {cos} for {cfg:?}: {oracle:?} vs {resp:?}");
        if oracle.edge_margin > 1e-3 {
            compared += 1;
            agree += usize::from(oracle.mode == resp.mode);
        }
    }
    assert!(compared > 150);
    assert_eq!(agree, compared);
}

#[test]
fn rotation_sense_follows_the_voting_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..500 {
        let cfg = random_contact(&mut rng);
        let Some(sense) = voting_sense(&cfg) else { continue };
        let resp = quasi_static_response(&cfg.shape, &cfg.pose, &cfg.point, &cfg.normal, &cfg.push);
        assert_eq!(resp.twist.omega.signum(), sense, "{cfg:?}");
        checked += 1;
    }
    assert!(checked > 300);
}

#[test]
fn frictionless_contact_pushes_along_the_normal() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let mut cfg = random_contact(&mut rng);
        cfg.shape.mu_contact = 0.0;
        let resp = quasi_static_response(&cfg.shape, &cfg.pose, &cfg.point, &cfg.normal, &cfg.push);
        assert!(resp.force.normalize().dot(&cfg.normal) > 1.0 - 1e-12);
    }
}

fn square_world(centre_y: f64, gap: f64) -> (WorldState, PusherTip) {
    let tip = PusherTip::default();
    let sensor = PlanarSensor {
        position: common::V::new(centre_y, -tip.contact_radius() - gap),
        heading: 0.0,
    };
    (
        WorldState::new(PlanarPose::new(0.0, 30.0, 0.0), sensor.to_transform()),
        tip,
    )
}

#[test]
fn halving_the_substep_changes_little() {
    let shape = shape_by_name("blue_square").unwrap();
    for centre_y in [0.0, 8.0, 20.0, -26.0] {
        let (world, tip) = square_world(centre_y, 0.5);
        let coarse = TapMotion::default();
        let fine = TapMotion {
            substep: coarse.substep / 2.0,
            ..coarse
        };
        let (a, _) = simulate_tap(&world, &shape, &tip, &world.pusher_pose, &coarse).unwrap();
        let (b, ta) = simulate_tap(&world, &shape, &tip, &world.pusher_pose, &fine).unwrap();
        assert!(ta.len() > 40);
        let (pa, pb) = (a.object_pose, b.object_pose);
        assert!((pa.position() - pb.position()).norm() < 0.2, "{pa:?} vs {pb:?}");
        assert!((pa.alpha - pb.alpha).abs() < 0.2, "{pa:?} vs {pb:?}");
    }
}

proptest! {
    #[test]
    fn twist_is_the_normalized_ellipsoid_gradient(fy in -5.0..5.0f64, fz in -5.0..5.0f64, m in -100.0..100.0f64) {
        prop_assume!(fy.abs() + fz.abs() + m.abs() > 1e-6);
        let shape = shape_by_name("rectangle").unwrap();
        let tw = limit_surface_twist(&Wrench { fy, fz, m }, &shape).unwrap();
        let (ff, mm) = (shape.f_max, shape.m_max);
        let g = [fy / (ff * ff), fz / (ff * ff), m / (mm * mm)];
        let c = mm / ff;
        let cos = cosine(&[tw.vy, tw.vz, tw.omega * c], &[g[0], g[1], g[2] * c]);
        prop_assert!(cos > 1.0 - 1e-12);
        let norm = (tw.vy.powi(2) + tw.vz.powi(2) + (tw.omega * c).powi(2)).sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resolution_leaves_no_overlap(y in -45.0..45.0f64, gap in -0.4..0.4f64, dy in -0.3..0.3f64, dz in 0.0..0.4f64, alpha in -30.0..30.0f64) {
        let shape = shape_by_name("blue_square").unwrap();
        let tip = PusherTip::default();
        let pose = PlanarPose::new(0.0, 30.0, alpha);
        let centre = common::V::new(y, -tip.contact_radius() - gap.max(0.0) - 2.0 + 2.0);
        let (next, c) = resolve_contact(&pose, &centre, &shape, &tip, &common::V::new(dy, dz)).unwrap();
        prop_assert!(c.penetration <= PENETRATION_TOLERANCE);
        let moved = next != pose;
        prop_assert_eq!(moved, c.mode != ContactMode::Separated);
        prop_assert!(next.alpha.is_finite() && next.y.is_finite() && next.z.is_finite());
    }

    #[test]
    fn withdrawing_pusher_never_drags(y in -25.0..25.0f64, back in 0.01..0.5f64) {
        let shape = shape_by_name("blue_square").unwrap();
        let tip = PusherTip::default();
        let pose = PlanarPose::new(0.0, 30.0, 0.0);
        let centre = common::V::new(y, -tip.contact_radius());
        let (next, _) = resolve_contact(&pose, &centre, &shape, &tip, &common::V::new(0.0, -back)).unwrap();
        prop_assert_eq!(next, pose);
    }
}
