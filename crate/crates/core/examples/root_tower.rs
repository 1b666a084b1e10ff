use nonarch::root::{build_tower, verify_tower, RootOptions};
use nonarch::{FieldSpec, Scalar};

fn main() -> nonarch::Result<()> {
    let f2t = FieldSpec::fq_laurent(2, 4, 30)?;
    let q3 = FieldSpec::padic(3, 30)?;

    // 3-power roots of t^9 (1 + t) in F_4((t)); 3 is a unit there
    let f = Scalar::parse(&f2t, "t^9 + t^10")?;
    let tower = build_tower(&f, 3, 2, &RootOptions::default())?;
    for (e, x) in tower.elements.iter().enumerate() {
        println!("f^(1/3^{e}) = {x}");
    }
    println!("verified: {}", verify_tower(&tower));

    // 3 has no square root in Q_3
    match build_tower(&Scalar::from_int(&q3, 3), 2, 1, &RootOptions::default()) {
        Ok(_) => println!("unexpected root"),
        Err(e) => println!("obstruction: {e}"),
    }
    Ok(())
}
