"""
Command-line front door.

dispatch() maps the pipeline commands (hyphenated names allowed) onto the
exclqa management commands and passes Django's own commands through.
Exit status: 0 on success, 1 on domain errors, 2 on usage errors.
"""
import os
import sys

COMMANDS = {
    'gen': 'generate certified q-ary instances',
    'reduce': 'LLL-reduce a basis file',
    'oracle': 'certify lambda1 of a basis by enumeration',
    'encode': 'Gram matrix or basis to Hamiltonian file',
    'solve': 'run one method on one instance',
    'tune-alpha': 'binary-search the inverse-penalty alpha',
    'bench': 'full sweep over methods and ranks',
    'spectrum': 'exact spectrum of a small Hamiltonian',
    'trace': 'per-step cost traces of several shots',
}


def usage():
    lines = ['usage: manage.py <command> [options]', '', 'commands:']
    lines += [f'  {name:<11} {text}' for name, text in COMMANDS.items()]
    lines += ['', "Django commands (migrate, createsuperuser, ...) are also available.",
              "Run 'manage.py <command> --help' for a command's options."]
    return '\n'.join(lines) + '\n'


def dispatch(argv):
    """Run the command named by argv[0]; return the process exit status."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'excited_annealer.settings')
    import django
    from django.core.management import get_commands, load_command_class

    django.setup()
    if not argv or argv[0] in ('-h', '--help', 'help'):
        sys.stdout.write(usage())
        return 0 if argv else 2

    name = argv[0].replace('-', '_')
    commands = get_commands()
    if name not in commands:
        sys.stderr.write(f'Unknown command: {argv[0]!r}\n{usage()}')
        return 2

    command = load_command_class(commands[name], name)
    try:
        command.run_from_argv(['manage.py', name, *argv[1:]])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0
