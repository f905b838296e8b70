use crate::config::Config;
use crate::experiments as ex;
use crate::report::Report;

pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    pub run: fn(&Config) -> anyhow::Result<Report>,
}

pub const REGISTRY: &[Experiment] = &[
    Experiment { name: "ccr_car", about: "CCR/CAR, adjoints and the quadratic identities on safe subspaces", run: ex::ccr_car },
    Experiment { name: "weitzenbock", about: "square of both Dirac operators against 2(N + energy), and square spectra", run: ex::weitzenbock },
    Experiment { name: "kernel_count", about: "kernel dimensions against weighted partition counts; kernel support", run: ex::kernel_count },
    Experiment { name: "per_estimate", about: "exhaustive scan of the dual-lowering estimate and its equality case", run: ex::per_estimate },
    Experiment { name: "xi_norms", about: "‖dR_z Ξ_σ‖ by radial quadrature and by the Hermite series", run: ex::xi_norms },
    Experiment { name: "sigma_tails", about: "tail bounds against a partial-sum oracle and frozen-tail norms", run: ex::sigma_tails },
    Experiment { name: "fingroup_suite", about: "cocycles, crossed products, Mishchenko projections, block structure, m-iso", run: ex::fingroup_suite },
    Experiment { name: "level_suite", about: "level orthogonality in twisted algebras and crossed products", run: ex::level_suite },
    Experiment { name: "jcycle_diag", about: "j-cycle square, commutator and compactness estimates", run: ex::jcycle_diag },
    Experiment { name: "assembly_compare", about: "compressed j-cycle against ∂_L, loop and finite-group models", run: ex::assembly_compare },
    Experiment { name: "index_compare", about: "KK index against the analytic index through the transpose", run: ex::index_compare },
    Experiment { name: "kucerovsky", about: "commutator and positivity conditions for the product", run: ex::kucerovsky },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}
