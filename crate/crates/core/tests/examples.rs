mod adiabatic {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/adiabatic.rs"));
}

mod closed_form_flow {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/closed_form_flow.rs"));
}

mod dichotomy {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dichotomy.rs"));
}

mod donaldson_futaki {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/donaldson_futaki.rs"));
}

mod git_classify {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/git_classify.rs"));
}

mod kempf_ness_suite {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/kempf_ness_suite.rs"));
}

mod matrix_lie {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/matrix_lie.rs"));
}

mod moment_map {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/moment_map.rs"));
}

mod nu_invariant {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/nu_invariant.rs"));
}

mod projected_flow {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/projected_flow.rs"));
}

mod projective_flow {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/projective_flow.rs"));
}

mod scenario_run {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenario_run.rs"));
}

#[test]
fn adiabatic_runs() {
    adiabatic::run_example().expect("adiabatic example should run");
}

#[test]
fn closed_form_flow_runs() {
    closed_form_flow::run_example().expect("closed_form_flow example should run");
}

#[test]
fn dichotomy_runs() {
    dichotomy::run_example().expect("dichotomy example should run");
}

#[test]
fn donaldson_futaki_runs() {
    donaldson_futaki::run_example().expect("donaldson_futaki example should run");
}

#[test]
fn git_classify_runs() {
    git_classify::run_example().expect("git_classify example should run");
}

#[test]
fn kempf_ness_suite_runs() {
    kempf_ness_suite::run_example().expect("kempf_ness_suite example should run");
}

#[test]
fn matrix_lie_runs() {
    matrix_lie::run_example().expect("matrix_lie example should run");
}

#[test]
fn moment_map_runs() {
    moment_map::run_example().expect("moment_map example should run");
}

#[test]
fn nu_invariant_runs() {
    nu_invariant::run_example().expect("nu_invariant example should run");
}

#[test]
fn projected_flow_runs() {
    projected_flow::run_example().expect("projected_flow example should run");
}

#[test]
fn projective_flow_runs() {
    projective_flow::run_example().expect("projective_flow example should run");
}

#[test]
fn scenario_run_runs() {
    scenario_run::run_example().expect("scenario_run example should run");
}
