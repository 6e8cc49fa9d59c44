//! Builds the reference planforms, removes inboard membrane and prints the
//! blade-element discretization.

use flapwing::wing::{presets, WingGeometry};

fn main() -> flapwing::Result<()> {
    let rect = presets::rectangular_reference();
    let tapered = presets::tapered_reference();
    for (name, wing) in [("rectangular", &rect), ("tapered", &tapered)] {
        let cut = wing.apply_inboard_cutout(0.25)?;
        println!(
            "{name:12} span {:.1} cm, area {:.2} cm2, AR {:.2}, with 25% cutout {:.2} cm2",
            wing.span() * 100.0,
            wing.area() * 1e4,
            wing.aspect_ratio(),
            cut.area() * 1e4
        );
    }

    for area in presets::WING_SET_AREAS {
        let w = WingGeometry::rectangular_with_aspect_ratio(area, presets::WING_SET_ASPECT_RATIO)?;
        println!(
            "{:.1} cm2 at AR {} -> span {:.2} cm",
            area * 1e4,
            presets::WING_SET_ASPECT_RATIO,
            w.span() * 100.0
        );
    }

    println!("\n{:>8} {:>8} {:>8} {:>6}", "r_mm", "c_mm", "l_mm", "mask");
    for e in tapered.apply_inboard_cutout(0.25)?.discretize(10)?.iter() {
        println!(
            "{:8.2} {:8.2} {:8.2} {:6.3}",
            e.r_mid * 1e3,
            e.chord * 1e3,
            e.axis_offset * 1e3,
            e.area_scale
        );
    }
    Ok(())
}
