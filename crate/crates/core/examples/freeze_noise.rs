use strainmap::noise::*;

fn main() {
    let model = NoiseModel::new(1.0, 3).unwrap();
    let eta = sample_noise(&model, &mut stream_rng(42, 0, 0));
    println!("{:?} {:?} {:?}", eta[0], eta[1], eta[2]);
}
