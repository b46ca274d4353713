from flatlab.cli import main

main()
