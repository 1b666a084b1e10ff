use std::fmt::Debug;

/// Residue-level coefficient field of a Laurent series field.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync {
    type Ctx;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(n: i64, ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn neg(&self, ctx: &Self::Ctx) -> Self;
    fn mul(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn inv(&self, ctx: &Self::Ctx) -> Option<Self>;

    fn sub(&self, o: &Self, ctx: &Self::Ctx) -> Self {
        self.add(&o.neg(ctx), ctx)
    }

    /// All `x` in the field with `x^p = self`, in canonical order.
    fn pth_roots(&self, p: u64, ctx: &Self::Ctx) -> Vec<Self>;

    /// The value as an element of the prime field, when it lies there.
    fn prime_const(&self, ctx: &Self::Ctx) -> Option<u64>;

    fn render(&self, ctx: &Self::Ctx) -> String;

    /// Whether `render` needs parentheses when used as a factor.
    fn is_compound(&self, ctx: &Self::Ctx) -> bool;
}
