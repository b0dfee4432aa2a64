mod assess;
mod augment;
mod diversity;
mod evaluate;
mod generate;
mod prealign;
mod probe;
mod subsample;

use crate::args::Command;
use crate::context::Context;
use crate::error::CliResult;

pub fn dispatch(ctx: &Context, command: &Command) -> CliResult<()> {
    match command {
        Command::Generate(a) => generate::run(ctx, a),
        Command::Assess(a) => assess::run(ctx, a),
        Command::Diversity(a) => diversity::run(ctx, a),
        Command::Evaluate(a) => evaluate::run(ctx, a),
        Command::Prealign(a) => prealign::run(ctx, a),
        Command::Probe(a) => probe::run(ctx, a),
        Command::Subsample(a) => subsample::run(ctx, a),
        Command::Augment(a) => augment::run(ctx, a),
    }
}
