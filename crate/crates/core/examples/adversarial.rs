//! Stress a schedule with ramp-and-drop instances and with the sequences
//! that realize each interval ratio.

use ksearch::augmented::interval_ratios;
use ksearch::instances::{default_epsilon, gen_p_instance, gen_worst_case_sequence, PInstanceSpec};
use ksearch::{design, ota_ratio, PriceBounds, ProblemKind};

fn main() -> ksearch::Result<()> {
    let bounds = PriceBounds::new(5.0, 50.0)?;
    let k = 20;
    let d = design(ProblemKind::MinSearch, 20.0, 0.4, &bounds, k)?;
    println!("min-search design: eta {:.4} gamma {:.4}", d.target.eta(), d.target.gamma());

    let mut worst: (f64, f64) = (0.0, 0.0);
    for j in 0..=45 {
        let p = 5.0 + j as f64;
        let inst = gen_p_instance(&PInstanceSpec::new(ProblemKind::MinSearch, p, bounds, k).with_step(0.25))?;
        let r = ota_ratio(&d.schedule, &inst)?;
        if r > worst.1 {
            worst = (p, r);
        }
    }
    println!("worst p-instance: p={} ratio {:.4}", worst.0, worst.1);

    let ratios = interval_ratios(&d.schedule);
    let eps = default_epsilon(&bounds);
    for i in [0, 5, 10, 15, 20] {
        let inst = gen_worst_case_sequence(&d.schedule, i, eps)?;
        println!(
            "interval {:>2}: analytic {:.4} realized {:.4}",
            i + 1,
            ratios[i],
            ota_ratio(&d.schedule, &inst)?
        );
    }
    Ok(())
}
