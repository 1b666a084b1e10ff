use std::sync::Arc;

use nonarch::series::{SeriesKind, TateSeries};
use nonarch::{FieldSpec, RadiusContext, RadiusDecl};

fn main() -> nonarch::Result<()> {
    let q3 = FieldSpec::padic(3, 30)?;
    let ctx = Arc::new(RadiusContext::new(3, vec![RadiusDecl::near_six_tenths("r")])?);
    for src in ["1 + 3*T", "T^-1 + 9*T^2", "3 + T - T^-2"] {
        let f = TateSeries::parse_univariate(&q3, &ctx, "r", SeriesKind::Laurent, src)?;
        let (gauss, _) = f.gauss_norm()?;
        let (rho, _) = f.spectral_radius_laurent()?;
        println!("{src:>14}: |f| = {gauss}  rho(f) = {rho}");
        for l in [1, 2, 4] {
            println!("{:>16}|f^{l}|^(1/{l}) = {}", "", f.spectral_power_estimate(l)?);
        }
    }
    Ok(())
}
