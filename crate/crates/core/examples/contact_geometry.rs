//! Shape catalog, closest boundary points and start placement.
//!
//! `cargo run --example contact_geometry`

use tactile_push::pose::Transform;
use tactile_push::scene::{
    builtin_shapes, closest_boundary_point, place_against_edge, place_corner_first, shape_by_name, PlanarPose,
    PusherTip, Vec2,
};

fn main() {
    for s in builtin_shapes() {
        println!(
            "{:16} convex={:5} f_max={:.3} N  m_max={:.2} N mm  cof=({:.2}, {:.2})",
            s.name,
            s.is_convex(),
            s.f_max,
            s.m_max,
            s.cof().x,
            s.cof().y
        );
    }

    let square = shape_by_name("blue_square").unwrap();
    let pose = PlanarPose::new(0.0, 0.0, 0.0);
    for p in [Vec2::new(40.0, 0.0), Vec2::new(40.0, 40.0), Vec2::new(5.0, 2.0)] {
        let bp = closest_boundary_point(&square, &pose, &p);
        println!(
            "query {:?} -> point {:?} normal {:?} {:?} distance {:.3}",
            p.as_slice(),
            bp.point.as_slice(),
            bp.outward_normal.as_slice(),
            bp.feature,
            bp.signed_distance
        );
    }

    let tip = PusherTip::default();
    let sensor = Transform::identity();
    let edge = place_against_edge(&square, &sensor, &tip, 0, 20.0, -20.0, 2.0).unwrap();
    println!("edge-first placement, offset 20 mm, angle -20: {edge:?}");
    let corner = place_corner_first(&square, &sensor, &tip, 0, 2.0);
    println!("corner-first placement: {corner:?}");
}
