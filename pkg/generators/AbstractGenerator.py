from abc import ABC, abstractmethod
import argparse

class AbstractGenerator(ABC):

    @abstractmethod
    def generate_subparser(subparser) -> [str, argparse.ArgumentParser]:
        """Return (subcommand name, subparser); the subparser must set_defaults(func=...)."""
        pass
