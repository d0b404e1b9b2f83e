"""Entry point: ``python wickrot.py verify --model fixtures/oscillator.json``."""

from cli.main import main

if __name__ == "__main__":
    main()
