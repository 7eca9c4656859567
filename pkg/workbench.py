import importlib, logging, sys, os, argparse

logger = logging.getLogger(__name__)

def discover_generators(module_dir, abstract_name):
    """Yield every class named after its `*Generator.py` module in module_dir that subclasses abstract_name."""
    _base = getattr(importlib.import_module(f".{abstract_name}", module_dir), abstract_name)
    _path = os.path.join(os.path.dirname(os.path.abspath(__file__)), module_dir)
    for _file in sorted(os.listdir(_path)):
        _mod_name, _ext = os.path.splitext(_file)
        if _ext != '.py' or not _mod_name.endswith('Generator') or _mod_name == abstract_name:
            continue
        _class = getattr(importlib.import_module(f".{_mod_name}", module_dir), _mod_name, None)
        if _class is not None and issubclass(_class, _base):
            yield _class
        else:
            logger.debug(f"{module_dir}.{_mod_name} does not implement {abstract_name}, skipping")


def generate_parser(prog, module_dir, abstract_name):
    """Build the CLI parser; each generator class contributes one subcommand.

    Returns (parser, {subcommand name: generator class}).
    """
    parser = argparse.ArgumentParser(prog=prog,
        description="A verification workbench for the chain parity task: quantum and classical protocols, reach-set search and teleportation.")
    subparser = parser.add_subparsers(dest="generator_name", required=True,
        title="Subcommands", description=f"Experiment utilities accessible via the {prog} CLI.")
    subparser_mappings = {}
    for _class in discover_generators(module_dir, abstract_name):
        _name, _ = _class.generate_subparser(subparser)
        subparser_mappings[_name] = _class
        logger.debug(f"Registered subcommand {_name} from {_class.__name__}")
    return parser, subparser_mappings


if __name__ == '__main__':
    logging.basicConfig(level=logging.DEBUG if os.getenv("DEBUG") else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    parser, subparser_mappings = generate_parser(sys.argv[0], 'generators', 'AbstractGenerator')
    parsed_args = parser.parse_args(sys.argv[1:])
    parsed_args.func(parsed_args)
