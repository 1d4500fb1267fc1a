# the tests package only exists so that setup.py can exclude it from
# installation; the suite itself is run with pytest from the repository root
