//! Certification that 𝒟_{d,m}(n) > 0 for every n beyond an explicit threshold.

pub mod certificate;
pub mod chen;
pub mod errpoly;
pub mod general;
pub mod series;
pub mod sup;

pub use certificate::{
    certify_threshold, check_document, default_epsilon, expand_d_with_errors, leading_constant,
    threshold_for_epsilon, CertificateCheckError, CertificateConfig, CertificateDocument,
    CheckReport, ExpandedHankel, HyperbolicityCertificate, MinorCertificate,
};
pub use chen::{
    chen_certificate, chen_check_n, chen_direct_check, chen_leading_constant, chen_u, kappa_of,
    ChenCertificate, ChenDirectReport, ChenTail, ChenVerdict, CHEN_DEFAULT_DIRECT, CHEN_DEFAULT_EPSILON,
    CHEN_DEFAULT_S,
};
pub use errpoly::{split_coefficients, CoefficientSplit, ErrorPoly};
pub use general::{
    coefficient_mass, coefficient_mass_bound, general_bound_report, general_epsilon, GeneralBoundDocument,
    GeneralBoundReport, LemmaValues,
};
pub use series::{r_series_at, taylor_of_r, SeriesPoly};
pub use sup::{
    closed_form_derivative_bound, ratio_remainder_sup, sup_abs_derivative, taylor_error_bound, SupBound,
    SupStrategy, TaylorErrorBound,
};
