//! Learning-augmented schedules for one robustness target as the prediction
//! moves across the price range.

use ksearch::augmented::{design_target, Segment};
use ksearch::{ota_ratio, ParetoPoint, PriceBounds, ProblemKind, SearchInstance};

fn main() -> ksearch::Result<()> {
    let bounds = PriceBounds::new(5.0, 50.0)?;
    let target = ParetoPoint::from_ratios(1.52, 2.63)?;
    for prediction in [8.0, 12.0, 15.0, 25.0] {
        let d = design_target(ProblemKind::MaxSearch, prediction, target, &bounds, 20)?;
        let shape: String = d
            .segments
            .iter()
            .map(|s| match s {
                Segment::Prefix => 'z',
                Segment::Prediction => 'c',
                Segment::Tail => 'r',
            })
            .collect();
        println!(
            "P={prediction:>4}: case {:<3} sigma*={:>2} j*={:>2} m*={:>2} i*={:>2} {shape} max ratio {:.4} at P {:.4}",
            d.case,
            d.sigma_star,
            d.j_star,
            d.m_star,
            d.i_star,
            d.max_ratio(),
            d.consistency_ratio()
        );
        // the prediction comes true: prices sit at P for a while, then crash
        let mut prices = vec![prediction; 20];
        prices.extend([5.0; 20]);
        let inst = SearchInstance::new(prices, 20, bounds)?;
        println!("         realized ratio when the prediction is right: {:.4}", ota_ratio(&d.schedule, &inst)?);
    }
    Ok(())
}
