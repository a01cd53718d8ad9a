use multisecretary::axioms::{check_ejr_bruteforce, EjrVariant};
use multisecretary::{bos, mes, nash_optimum_bruteforce, nash_welfare, utilitarian_topk, Committee, Election};

fn committee(ms: &[usize]) -> Committee {
    Committee::from_members(ms.iter().copied()).unwrap()
}

#[test]
fn hiring_board_offline() {
    let e = Election::example_hiring_board();
    assert_eq!(utilitarian_topk(&e).members(), &[3, 5]);
    // Voter sums for {c4,c6} are 0 and 3 + 3, so the objective is ln 1 + ln 7.
    let pi = nash_welfare(&e, &committee(&[3, 5]));
    assert!((pi - 7f64.ln()).abs() < 1e-12);
}

#[test]
fn nash_optimum_matches_pairwise_enumeration() {
    let e = Election::example_hiring_board();
    let mut best = f64::NEG_INFINITY;
    for a in 0..6 {
        for b in a + 1..6 {
            let s0: f64 = e.utility(0, a) + e.utility(0, b);
            let s1: f64 = e.utility(1, a) + e.utility(1, b);
            best = best.max((1.0 + s0).ln() + (1.0 + s1).ln());
        }
    }
    let (w, value) = nash_optimum_bruteforce(&e).unwrap();
    assert!((value - best).abs() < 1e-12);
    assert!((nash_welfare(&e, &w) - best).abs() < 1e-12);
}

#[test]
fn bos_matches_mes_when_everything_is_affordable() {
    // Two disjoint blocks of four voters, k = 2: each block buys its favourite.
    let rows: Vec<Vec<f64>> = (0..8)
        .map(|i| if i < 4 { vec![3.0, 1.0, 0.0, 0.0] } else { vec![0.0, 0.0, 2.0, 1.0] })
        .collect();
    let e = Election::new(&rows, 2, None).unwrap();
    let (w, trace) = mes(&e);
    assert!(trace.completion_added.is_empty());
    assert_eq!(w.members(), &[0, 2]);
    assert_eq!(bos(&e).0.members(), w.members());
}

/// With cardinal utilities the core alone can leave a cohesive group short:
/// the second voter pays towards c1, which it barely values, and the pair
/// {v2, v4} can no longer afford c2. Completion repairs it here.
#[test]
fn cardinal_core_can_miss_ejr() {
    let rows = vec![
        vec![5.0, 0.0, 0.0],
        vec![1.0, 4.0, 0.0],
        vec![2.1, 0.0, 3.0],
        vec![0.0, 3.0, 0.0],
    ];
    let e = Election::new(&rows, 2, None).unwrap();
    let (w, trace) = mes(&e);
    assert_eq!(trace.core(), vec![0]);
    let r = check_ejr_bruteforce(&e, &committee(&trace.core()), EjrVariant::EXACT).unwrap();
    assert!(!r.satisfied);
    assert_eq!(r.witnesses[0].group, vec![1, 3]);
    assert_eq!(w.members(), &[0, 1]);
    assert!(check_ejr_bruteforce(&e, &w, EjrVariant::EXACT).unwrap().satisfied);
}
