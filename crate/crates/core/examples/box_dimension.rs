//! Box-counting slopes of reference sets.
use padic_littlewood::dimension::{box_dim_estimate, default_ladder, separated_count, PointSet1D};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ladder = default_ladder();
    for s in [PointSet1D::new([0.25], "point"), PointSet1D::grid(0.0, 1.0, 1 << 14), PointSet1D::cantor(9)] {
        let fit = box_dim_estimate(&s, &ladder)?;
        println!("{:<28} slope {:.4}  r^2 {:.4}", s.label(), fit.slope, fit.r_squared);
    }
    println!("log 2 / log 3 = {:.4}", 2f64.ln() / 3f64.ln());
    println!("0.01-separated points in the 1001-grid: {}", separated_count(&PointSet1D::grid(0.0, 1.0, 1001), 0.01));
    Ok(())
}
