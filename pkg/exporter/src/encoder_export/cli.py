"""Command line wrapper around export_embeddings."""

import click

from .encoders import ENCODERS
from .errors import ExportError
from .export import ExportJob, export_embeddings


@click.command()
@click.option("--encoder", required=True, type=click.Choice(list(ENCODERS)))
@click.option("--model", default="", help="Override the pinned checkpoint id.")
@click.option("--manifest", required=True, type=click.Path())
@click.option("--out", required=True, type=click.Path())
@click.option("--batch-size", default=32, show_default=True)
def main(encoder: str, model: str, manifest: str, out: str, batch_size: int) -> None:
    """Embed every text in MANIFEST and write the vector store to OUT."""
    try:
        job = ExportJob(
            manifest_path=manifest,
            encoder=encoder,
            output_path=out,
            model_identifier=model,
            batch_size=batch_size,
        )
        result = export_embeddings(job)
    except (ExportError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(
        f"wrote {result.records} vectors (dim {result.dim}) to {result.output_path}"
    )


if __name__ == "__main__":
    main()
