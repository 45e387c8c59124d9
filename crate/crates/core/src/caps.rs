/// Size limits for category construction.
///
/// User-supplied categories are rejected beyond these bounds. Derived
/// constructions (level categories, fibration totals) are bounded separately
/// by [`Caps::derived_objects`]/[`Caps::derived_morphisms`], since they grow
/// combinatorially out of legitimately small inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_objects: usize,
    pub max_morphisms: usize,
    /// Largest simplex dimension for twisted-arrow shapes and Segal levels.
    pub max_level: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: 64,
            max_morphisms: 4096,
            max_level: 4,
        }
    }
}

impl Caps {
    pub fn derived_objects(&self) -> usize {
        self.max_objects.saturating_mul(self.max_objects)
    }

    pub fn derived_morphisms(&self) -> usize {
        self.max_morphisms.saturating_mul(256)
    }
}
