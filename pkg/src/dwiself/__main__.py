from dwiself.cli import dwiself_cli

def run_cli():
    dwiself_cli()

if __name__ == "__main__":
    run_cli()
