use dsalg::bside::{ann_fs, bs_ideal};
use dsalg::gb::Limits;
use dsalg::logder::{check_hypotheses, FactorizationSpec};
use dsalg::nabla::{bs_variety_membership, nabla_batch};
use dsalg::par::Exec;
use dsalg::ring::{ratio, Rat};

// x and 2x^2+yz: onto-ness of ∇_A along the diagonal and off it, checked
// against V(B_F) at the shifted point.
#[test]
fn worked_example_points() {
    let l = Limits::default();
    let spec = FactorizationSpec::parse(&["x", "y", "z"], &["x", "2*x^2+y*z"]).unwrap();
    let h = check_hypotheses(&spec, false, l).unwrap();
    let ann = ann_fs(&spec, &h, false, l).unwrap();
    let b = bs_ideal(&spec, &ann, l).unwrap();
    let cases: Vec<(Vec<Rat>, bool)> = vec![
        (vec![ratio(-2, 1), ratio(-2, 1)], true),
        (vec![ratio(-3, 1), ratio(-3, 1)], true),
        (vec![ratio(-4, 1), ratio(-4, 1)], true),
        (vec![ratio(0, 1), ratio(0, 1)], false),
        (vec![ratio(-1, 3), ratio(-1, 3)], false),
        (vec![ratio(-2, 3), ratio(-2, 3)], false),
        (vec![ratio(0, 1), ratio(-1, 3)], false),
        (vec![ratio(-1, 3), ratio(-2, 3)], true),
    ];
    let pts: Vec<Vec<Rat>> = cases.iter().map(|c| c.0.clone()).collect();
    let reps = nabla_batch(&spec, &ann, &h, &pts, Exec::default(), l).unwrap();
    for ((a, onto), rep) in cases.iter().zip(&reps) {
        assert_eq!(rep.surjective, *onto, "{a:?}");
        let shifted: Vec<Rat> = a.iter().map(|x| x - ratio(1, 1)).collect();
        assert_eq!(bs_variety_membership(&b, &shifted), !onto, "{a:?}");
    }
}
