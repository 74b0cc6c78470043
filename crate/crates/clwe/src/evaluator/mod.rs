//! The two evaluation procedures — bilingual lexicon induction precision and
//! eigenvalue similarity of embedding k-NN graphs — plus the ablation harness
//! and the synthetic-language generator that provides desk-scale oracles.

mod ablation;
mod bli;
mod eigsim;
mod report;
mod synth;

pub use ablation::{ablation_schemes, AblationInputs, Scheme};
pub use bli::{bli_precision, BliReport};
pub use eigsim::{
    delta_from_spectra, eigenvalue_similarity, energy_rank, knn_adjacency, laplacian_spectrum,
    EigsimReport, LaplacianKind,
};
pub use report::{ablation_csv, ablation_table, bli_csv, eigsim_csv, svg_bar_chart, svg_spectra};
pub use synth::{
    random_orthogonal, synth_generate, zipf_probabilities, Relatedness, SynthOutput, SynthSpec,
    BIGRAM_MIX_WEIGHT, BIGRAM_SHARPNESS, ZIPF_EXPONENT,
};
