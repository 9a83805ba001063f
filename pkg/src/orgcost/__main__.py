from orgcost.cli import main

main()
