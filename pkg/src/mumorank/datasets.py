"""Bundled example data."""

from importlib import resources

from .io import RunConfig, build_hypergraph, parse_config, parse_hyperedge_csv


def product_tagging_paths():
    """Paths of the bundled product-tagging CSV and its run config."""
    root = resources.files("mumorank") / "data"
    return root / "product_tagging.csv", root / "product_tagging.json"


def load_product_tagging():
    """Users x products x tags tagging sample: ``(hypergraph, RunConfig)``.

    The config declares the full node roster (including the tag ``pretty``,
    which no row uses), damping 0.3/0.2/0.1 and a hub-preferring preferred set.
    """
    csv_path, cfg_path = product_tagging_paths()
    table = parse_hyperedge_csv(csv_path.read_text(encoding="utf-8"))
    config: RunConfig = parse_config(cfg_path.read_text(encoding="utf-8"), table.header)
    return build_hypergraph(table, config), config
