//! Stream-value invariants, checked against an independent line-integral
//! oracle where the implementation uses closed forms.

use gliderpath::flowfield::{AnalyticFlow, FlowField2p5, GridLayer, Layer, PlanarFlow};
use gliderpath::Point2d;
use proptest::prelude::*;

fn p2(x: f64, y: f64) -> Point2d {
    Point2d::new(x, y)
}

/// Dense trapezoid quadrature of `u dy - v dx` along the straight segment -
/// an oracle independent of the closed-form stream functions.
fn line_integral(flow: &PlanarFlow<f64>, a: Point2d, b: Point2d, n: usize) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let f = |t: f64| {
        let v = flow.eval(p2(a.x + dx * t, a.y + dy * t));
        v.u * dy - v.v * dx
    };
    let mut acc = 0.5 * (f(0.0) + f(1.0));
    for k in 1..n {
        acc += f(k as f64 / n as f64);
    }
    acc / n as f64
}

fn arb_flow() -> impl Strategy<Value = AnalyticFlow<f64>> {
    let uniform = (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(u, v)| AnalyticFlow::uniform(u, v));
    let vortex = (
        -200.0..200.0f64,
        -200.0..200.0f64,
        -2.0..2.0f64,
        40.0..250.0f64,
    )
        .prop_map(|(x, y, s, r)| AnalyticFlow::vortex(p2(x, y), s, r));
    let gyre = (
        -300.0..0.0f64,
        -300.0..0.0f64,
        200.0..800.0f64,
        200.0..800.0f64,
        -150.0..150.0f64,
    )
        .prop_map(|(x, y, lx, ly, a)| AnalyticFlow::gyre(p2(x, y), [lx, ly], a));
    prop_oneof![uniform, vortex, gyre]
}

fn arb_point() -> impl Strategy<Value = Point2d> {
    (-400.0..400.0f64, -400.0..400.0f64).prop_map(|(x, y)| p2(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn antisymmetry_exact_for_analytic(flow in arb_flow(), a in arb_point(), b in arb_point()) {
        let planar = PlanarFlow::from_analytic(flow);
        let ab = planar.stream_value(a, b).unwrap();
        let ba = planar.stream_value(b, a).unwrap();
        prop_assert_eq!(ab, -ba);
    }

    #[test]
    fn additivity(flow in arb_flow(), a in arb_point(), b in arb_point(), c in arb_point()) {
        let planar = PlanarFlow::from_analytic(flow);
        let ab = planar.stream_value(a, b).unwrap();
        let bc = planar.stream_value(b, c).unwrap();
        let ac = planar.stream_value(a, c).unwrap();
        let scale = ab.abs().max(bc.abs()).max(ac.abs()).max(1.0);
        prop_assert!(((ab + bc) - ac).abs() <= 1e-10 * scale);
    }

    #[test]
    fn closed_form_matches_line_integral_over_any_polyline(
        flow in arb_flow(),
        a in arb_point(),
        m in arb_point(),
        b in arb_point(),
    ) {
        let planar = PlanarFlow::from_analytic(flow);
        let direct = planar.stream_value(a, b).unwrap();
        let via_m = line_integral(&planar, a, m, 4000) + line_integral(&planar, m, b, 4000);
        let scale = direct.abs().max(1.0);
        prop_assert!(
            (direct - via_m).abs() <= 1e-4 * scale + 1e-4,
            "closed form {} vs polyline quadrature {}",
            direct,
            via_m
        );
    }

    #[test]
    fn superposition_is_linear(
        f1 in arb_flow(),
        f2 in arb_flow(),
        a in arb_point(),
        b in arb_point(),
    ) {
        let s1 = PlanarFlow::from_analytic(f1.clone()).stream_value(a, b).unwrap();
        let s2 = PlanarFlow::from_analytic(f2.clone()).stream_value(a, b).unwrap();
        let sum = PlanarFlow::from_analytic(AnalyticFlow::superposition(vec![f1, f2]))
            .stream_value(a, b)
            .unwrap();
        let scale = s1.abs().max(s2.abs()).max(1.0);
        prop_assert!((sum - (s1 + s2)).abs() <= 1e-10 * scale);
    }

    #[test]
    fn averaged_layer_commutes_with_stream_value(
        f_top in arb_flow(),
        f_bot in arb_flow(),
        a in arb_point(),
        b in arb_point(),
        z_a in -90.0..-10.0f64,
        z_b in -90.0..-10.0f64,
    ) {
        prop_assume!((z_a - z_b).abs() > 1e-6);
        let field = FlowField2p5::new(vec![
            Layer::analytic(0.0, f_top),
            Layer::analytic(-100.0, f_bot),
        ]).unwrap();
        let avg = field.averaged_layer(z_a, z_b).unwrap();
        let got = avg.stream_value(a, b).unwrap();
        let at_a = field.slice_at(z_a).stream_value(a, b).unwrap();
        let at_b = field.slice_at(z_b).stream_value(a, b).unwrap();
        let want = 0.5 * (at_a + at_b);
        let scale = at_a.abs().max(at_b.abs()).max(1.0);
        prop_assert!((got - want).abs() <= 1e-10 * scale);
    }
}

#[test]
fn grid_quadrature_antisymmetry_within_tolerance() {
    let vortex = AnalyticFlow::vortex(p2(0.0, 0.0), 1.0, 120.0);
    let grid = GridLayer::from_fn([-300.0, -300.0], [15.0, 15.0], [41, 41], |p| vortex.eval(p));
    let field = FlowField2p5::new(vec![Layer::grid(0.0, grid)]).unwrap();
    let planar = field.slice_at(0.0);
    let a = p2(-120.0, 45.0);
    let b = p2(200.0, -160.0);
    let ab = planar.stream_value(a, b).unwrap();
    let ba = planar.stream_value(b, a).unwrap();
    assert!((ab + ba).abs() <= 1e-9 * ab.abs().max(1.0));
}
