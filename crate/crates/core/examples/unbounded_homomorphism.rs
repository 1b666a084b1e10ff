//! The derivation d/dF on the lacunary series has no bounded extension: the
//! ratio |D(g)| / |g| grows without bound along the tails g = F - F_m.
use std::sync::Arc;

use nonarch::deriv::unboundedness_table;
use nonarch::{FieldSpec, RadiusContext, RadiusDecl};

fn main() -> nonarch::Result<()> {
    let q3 = FieldSpec::padic(3, 30)?;
    let ctx = Arc::new(RadiusContext::new(
        3,
        vec![RadiusDecl::near_six_tenths("r1"), RadiusDecl::default_irrational("r0707")],
    )?);
    for radius in ["r1", "r0707"] {
        let table = unboundedness_table(4, &q3, &ctx, radius, 6)?;
        println!("radius {radius}:");
        for row in &table.rows {
            println!("  m={} i_m={:<4} ratio={} (~1e{:.2})", row.n, row.index, row.ratio, row.ratio_log10);
        }
        println!("  verdict: {:?}", table.certificate.verdict);
    }
    Ok(())
}
