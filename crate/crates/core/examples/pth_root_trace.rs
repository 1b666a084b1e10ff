//! Square root of 1 + 3x in Q_3 with the full iteration trace.
use nonarch::root::{pth_root_near_one, RootOptions};
use nonarch::{FieldSpec, LogNorm, Scalar};

fn main() -> nonarch::Result<()> {
    let q3 = FieldSpec::padic(3, 12)?;
    let opts = RootOptions { tol: Some(LogNorm::from_base_int(12)), ..RootOptions::default() };
    let f = Scalar::parse(&q3, "7/4")?;
    let (root, trace) = pth_root_near_one(&f, 2, &opts).map_err(|e| e.into_error())?;
    for (m, step) in trace.steps.iter().enumerate() {
        println!(
            "m={:<2} |g|={:<10} |h|={:<10} contraction={} residual={}",
            m + 1,
            step.norm_g.to_string(),
            step.norm_h.to_string(),
            step.contraction_ok,
            step.residual_ok
        );
    }
    println!("root = {root}");
    println!("root^2 = {}", root.pow(2)?);
    println!("certified: {}", trace.certified);
    Ok(())
}
