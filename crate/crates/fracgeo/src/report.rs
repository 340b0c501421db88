//! CSV area report: `frame,t,area_ty,area_tau_y,rl_value`, one row per frame.

use fracgeo_core::geometry::FenceAnimation;

use crate::numfmt;

pub const HEADER: [&str; 5] = ["frame", "t", "area_ty", "area_tau_y", "rl_value"];

pub fn animation_to_csv(anim: &FenceAnimation) -> csv::Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(HEADER)?;
    for (i, frame) in anim.frames.iter().enumerate() {
        w.write_record([
            i.to_string(),
            numfmt::machine(frame.t),
            numfmt::machine(frame.scene.shadow_ty_area()),
            numfmt::machine(frame.scene.shadow_tau_y_area()),
            numfmt::machine(frame.rl.value),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracgeo_core::geometry::build_rl_animation;
    use fracgeo_core::quadrature::Tolerance;
    use fracgeo_core::special::Order;
    use fracgeo_core::RealFunction;

    #[test]
    fn rows_and_line_endings() {
        let f = RealFunction::parse("1").unwrap();
        let anim = build_rl_animation(&f, Order::new(1.0).unwrap(), 0.0, 1.0, 4, 16, &Tolerance::default()).unwrap();
        let text = animation_to_csv(&anim).unwrap();
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "frame,t,area_ty,area_tau_y,rl_value");
        assert_eq!(lines.len(), 5);
        let last: Vec<f64> = lines[4].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(last[0], 3.0);
        assert_eq!(last[1], 1.0);
        assert!((last[3] - 1.0).abs() < 1e-12);
        assert!((last[4] - 1.0).abs() < 1e-12);
    }
}
